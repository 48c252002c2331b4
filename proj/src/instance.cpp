#include "fairdiv/instance.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "fairdiv/errors.hpp"

namespace fairdiv {

using Json = nlohmann::ordered_json;

Instance::Instance(int m, std::vector<Agent> agents) : m_(m), agents_(std::move(agents)) {
    if (m < 0 || m > 64) throw Error("instance: item count must be in [0, 64]");
    if (agents_.empty()) throw Error("instance: need at least one agent");
    Rat total;
    for (const auto& a : agents_) {
        if (a.valuation.item_count() != m) {
            throw Error("instance: valuation item count disagrees with m");
        }
        if (!(a.entitlement > Rat(0))) throw Error("instance: entitlements must be positive");
        total += a.entitlement;
    }
    if (total > Rat(1)) throw Error("instance: entitlements must sum to at most 1");
}

Rat Instance::entitlement_total() const {
    Rat total;
    for (const auto& a : agents_) total += a.entitlement;
    return total;
}

bool Instance::equal_entitlements() const {
    for (const auto& a : agents_) {
        if (!(a.entitlement == agents_[0].entitlement)) return false;
    }
    return true;
}

namespace {

Rat parse_rat_field(const Json& j, const char* context) {
    if (!j.is_string()) throw Error(std::string(context) + ": rationals must be \"p/q\" strings");
    return Rat::parse(j.get<std::string>());
}

std::vector<Rat> parse_rat_array(const Json& j, const char* context) {
    if (!j.is_array()) throw Error(std::string(context) + ": expected an array");
    std::vector<Rat> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(parse_rat_field(e, context));
    return out;
}

Valuation parse_valuation(const Json& j, int m) {
    if (!j.is_object() || !j.contains("type")) throw Error("valuation: missing type");
    std::string type = j.at("type").get<std::string>();
    if (type == "additive") {
        auto values = parse_rat_array(j.at("values"), "additive values");
        if (static_cast<int>(values.size()) != m) throw Error("additive values: width mismatch");
        return Valuation::additive(std::move(values));
    }
    if (type == "xos") {
        const auto& cl = j.at("clauses");
        if (!cl.is_array() || cl.empty()) throw Error("xos clauses: expected non-empty array");
        std::vector<std::vector<Rat>> clauses;
        for (const auto& c : cl) clauses.push_back(parse_rat_array(c, "xos clause"));
        return Valuation::xos(m, std::move(clauses));
    }
    if (type == "table") {
        if (m > 16) throw Error("table valuation: m too large");
        const auto& vals = j.at("values");
        if (!vals.is_object()) throw Error("table values: expected an object");
        std::size_t need = std::size_t{1} << m;
        if (vals.size() != need) {
            throw Error("table values: need all " + std::to_string(need) + " bundle entries");
        }
        std::vector<Rat> table(need);
        std::vector<bool> seen(need, false);
        for (const auto& [key, val] : vals.items()) {
            std::uint64_t mask = 0;
            try {
                mask = std::stoull(key);
            } catch (const std::exception&) {
                throw Error("table values: bad bundle key '" + key + "'");
            }
            if (mask >= need || seen[mask]) {
                throw Error("table values: bad or duplicate bundle key '" + key + "'");
            }
            seen[mask] = true;
            table[mask] = parse_rat_field(val, "table value");
        }
        return Valuation::table(m, std::move(table));
    }
    throw Error("valuation: unknown type '" + type + "'");
}

Json valuation_to_json(const Valuation& v) {
    Json j;
    switch (v.kind()) {
        case Valuation::Kind::Additive: {
            j["type"] = "additive";
            Json arr = Json::array();
            for (const auto& x : v.additive_values()) arr.push_back(x.str());
            j["values"] = std::move(arr);
            return j;
        }
        case Valuation::Kind::Xos: {
            j["type"] = "xos";
            Json cl = Json::array();
            for (const auto& clause : v.clauses()) {
                Json arr = Json::array();
                for (const auto& x : clause) arr.push_back(x.str());
                cl.push_back(std::move(arr));
            }
            j["clauses"] = std::move(cl);
            return j;
        }
        case Valuation::Kind::Table: {
            j["type"] = "table";
            Json vals = Json::object();
            for (std::size_t mask = 0; mask < v.table_values().size(); ++mask) {
                vals[std::to_string(mask)] = v.table_values()[mask].str();
            }
            j["values"] = std::move(vals);
            return j;
        }
        case Valuation::Kind::Truncated:
            // Serialized as an explicit table; the wrapper is an in-memory form.
            {
                int m = v.item_count();
                if (m > 16) throw Error("cannot serialize a wide truncated valuation");
                std::vector<Rat> table(std::size_t{1} << m);
                for (std::uint64_t s = 0; s < table.size(); ++s) table[s] = v.eval(Bundle(s));
                return valuation_to_json(Valuation::table(m, std::move(table)));
            }
    }
    throw Error("unreachable");
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(std::string("instance JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("m") || !j.contains("agents")) {
        throw Error("instance: expected {\"m\":..., \"agents\":[...]}");
    }
    int m = j.at("m").get<int>();
    std::vector<Agent> agents;
    for (const auto& a : j.at("agents")) {
        Agent agent{parse_valuation(a.at("valuation"), m),
                    parse_rat_field(a.at("entitlement"), "entitlement")};
        agents.push_back(std::move(agent));
    }
    return Instance(m, std::move(agents));
}

Instance load_instance(const std::string& path) {
    std::ostringstream buffer;
    if (path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw Error("cannot open instance file: " + path);
        buffer << in.rdbuf();
    }
    return parse_instance(buffer.str());
}

std::string instance_to_json(const Instance& instance) {
    Json j;
    j["m"] = instance.item_count();
    Json agents = Json::array();
    for (const auto& a : instance.agents()) {
        Json agent;
        agent["entitlement"] = a.entitlement.str();
        agent["valuation"] = valuation_to_json(a.valuation);
        agents.push_back(std::move(agent));
    }
    j["agents"] = std::move(agents);
    return j.dump(2) + "\n";
}

}  // namespace fairdiv
