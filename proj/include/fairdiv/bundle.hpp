#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace fairdiv {

// Subset of item indices {0..m-1} with bitset semantics. Supports up to 64
// items; the owning context (valuation or instance) tracks m.
class Bundle {
public:
    constexpr Bundle() = default;
    explicit constexpr Bundle(std::uint64_t mask) : mask_(mask) {}

    static constexpr Bundle full(int m) {
        return Bundle(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
    }
    static constexpr Bundle single(int item) { return Bundle(std::uint64_t{1} << item); }

    constexpr std::uint64_t mask() const { return mask_; }
    constexpr bool empty() const { return mask_ == 0; }
    int size() const { return std::popcount(mask_); }

    constexpr bool contains(int item) const { return (mask_ >> item) & 1u; }
    constexpr bool contains(Bundle other) const { return (mask_ & other.mask_) == other.mask_; }
    constexpr bool intersects(Bundle other) const { return (mask_ & other.mask_) != 0; }

    constexpr Bundle with(int item) const { return Bundle(mask_ | (std::uint64_t{1} << item)); }
    constexpr Bundle without(int item) const { return Bundle(mask_ & ~(std::uint64_t{1} << item)); }

    friend constexpr Bundle operator|(Bundle a, Bundle b) { return Bundle(a.mask_ | b.mask_); }
    friend constexpr Bundle operator&(Bundle a, Bundle b) { return Bundle(a.mask_ & b.mask_); }
    friend constexpr Bundle operator-(Bundle a, Bundle b) { return Bundle(a.mask_ & ~b.mask_); }
    friend constexpr bool operator==(Bundle a, Bundle b) { return a.mask_ == b.mask_; }

    int lowest() const { return std::countr_zero(mask_); }

    std::vector<int> items() const {
        std::vector<int> out;
        for (std::uint64_t rest = mask_; rest; rest &= rest - 1) {
            out.push_back(std::countr_zero(rest));
        }
        return out;
    }

    std::string to_string() const { return std::to_string(mask_); }

private:
    std::uint64_t mask_ = 0;
};

// Lexicographic order of bundles viewed as increasing index sequences; the
// empty bundle is smallest and a proper prefix precedes its extensions.
inline bool lex_less(Bundle a, Bundle b) {
    std::uint64_t diff = a.mask() ^ b.mask();
    if (diff == 0) return false;
    int i = std::countr_zero(diff);
    if (a.contains(i)) {
        return (b.mask() >> i) != 0;  // b still has elements > i
    }
    return (a.mask() >> i) == 0;  // a is a proper prefix of b
}

// Calls fn(sub) for every subset of `of`, including empty and `of` itself,
// in decreasing mask order except the empty set last.
template <typename Fn>
void for_each_subset(Bundle of, Fn&& fn) {
    std::uint64_t mask = of.mask();
    for (std::uint64_t sub = mask;; sub = (sub - 1) & mask) {
        fn(Bundle(sub));
        if (sub == 0) break;
    }
}

}  // namespace fairdiv
