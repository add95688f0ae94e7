#include "cpinv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "cpinv/dynamics.hpp"

namespace cpinv {

namespace {

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError(where.empty() ? "config" : where, "expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
}

std::string path(const std::string& where, const std::string& key)
{
    return where.empty() ? key : where + "." + key;
}

template <typename T>
T get_field(const Json& j, const std::string& key, const std::string& where)
{
    const Json& v = j.at(key);
    const std::string field = path(where, key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean())
            throw ConfigError(field, "expected a boolean");
        return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
            throw ConfigError(field, "expected a string");
        return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number())
            throw ConfigError(field, "expected a number");
        return v.get<T>();
    } else {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
            throw ConfigError(field, "expected a non-negative integer");
        return static_cast<T>(v.get<unsigned long long>());
    }
}

template <typename T>
void maybe(const Json& j, const std::string& key, const std::string& where, T& out)
{
    if (j.contains(key))
        out = get_field<T>(j, key, where);
}

SingleDiffeoBlock parse_single(const Json& j, const std::string& where)
{
    reject_unknown_keys(j, {"diffeo"}, where);
    SingleDiffeoBlock b;
    if (!j.contains("diffeo"))
        throw ConfigError(path(where, "diffeo"), "missing");
    b.diffeo = get_field<std::string>(j, "diffeo", where);
    return b;
}

} // namespace

const DiffeoEntry* JobConfig::find_diffeo(const std::string& name) const
{
    for (const auto& d : diffeos)
        if (d.name == name)
            return &d;
    return nullptr;
}

DiffeoDescriptor JobConfig::descriptor(const std::string& name, const std::string& field) const
{
    const DiffeoEntry* e = find_diffeo(name);
    if (e == nullptr)
        throw ConfigError(field, "no diffeo named '" + name + "'");
    return {e->actions, e->name, e->conjugated};
}

void JobConfig::validate() const
{
    SphereProductManifold m{manifold};
    try {
        m.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.field(), e.what());
    }
    std::set<std::string> names;
    for (const auto& d : diffeos) {
        if (!names.insert(d.name).second)
            throw ConfigError("diffeos." + d.name, "duplicate name");
        DiffeoDescriptor{d.actions, "diffeos." + d.name, d.conjugated}.validate(m);
    }
    if (pv)
        descriptor(pv->diffeo, "pv.diffeo");
    if (hp)
        descriptor(hp->diffeo, "hp.diffeo");
    if (grading)
        descriptor(grading->diffeo, "grading.diffeo");
    if (compare) {
        descriptor(compare->a, "compare.a");
        descriptor(compare->b, "compare.b");
    }
    if (simulate) {
        const auto& s = *simulate;
        if (!(s.t >= 0.0 && s.t < 1.0))
            throw ConfigError("simulate.t", "must lie in [0, 1)");
        if (s.horizon < 1)
            throw ConfigError("simulate.horizon", "must be >= 1");
        if (s.density_horizon < 1)
            throw ConfigError("simulate.density_horizon", "must be >= 1");
        if (s.samples < dynamics::kTolerances.min_degree_samples)
            throw ConfigError("simulate.samples",
                              "must be >= " + std::to_string(dynamics::kTolerances.min_degree_samples));
        if (!(s.epsilon > 0.0 && s.epsilon < 1.0))
            throw ConfigError("simulate.epsilon", "must lie in (0, 1)");
        if (s.random_starts < 1)
            throw ConfigError("simulate.random_starts", "must be >= 1");
        if (s.csv_stride < 1)
            throw ConfigError("simulate.csv_stride", "must be >= 1");
        try {
            dynamics::parse_observable(s.observable);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("simulate.observable", e.what());
        }
    }
}

JobConfig parse_config(const Json& j)
{
    reject_unknown_keys(j, {"manifold", "diffeos", "pv", "hp", "grading", "compare", "simulate"}, "");
    JobConfig c;
    if (j.contains("manifold")) {
        const Json& m = j.at("manifold");
        if (!m.is_array())
            throw ConfigError("manifold", "expected an array of sphere dimensions");
        c.manifold.clear();
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i].is_number_integer())
                throw ConfigError("manifold[" + std::to_string(i) + "]", "expected an integer");
            c.manifold.push_back(m[i].get<int>());
        }
    }
    if (j.contains("diffeos")) {
        const Json& ds = j.at("diffeos");
        if (!ds.is_object())
            throw ConfigError("diffeos", "expected an object of named descriptors");
        for (const auto& [name, d] : ds.items()) {
            const std::string where = "diffeos." + name;
            reject_unknown_keys(d, {"actions", "conjugated"}, where);
            DiffeoEntry e;
            e.name = name;
            if (!d.contains("actions") || !d.at("actions").is_array())
                throw ConfigError(where + ".actions", "expected an array of factor actions");
            for (const auto& a : d.at("actions")) {
                if (!a.is_string())
                    throw ConfigError(where + ".actions", "expected strings");
                try {
                    e.actions.push_back(parse_factor_action(a.get<std::string>()));
                } catch (const ValidationError& err) {
                    throw ConfigError(where + ".actions", err.what());
                }
            }
            maybe(d, "conjugated", where, e.conjugated);
            c.diffeos.push_back(std::move(e));
        }
    }
    if (j.contains("pv"))
        c.pv = parse_single(j.at("pv"), "pv");
    if (j.contains("hp"))
        c.hp = parse_single(j.at("hp"), "hp");
    if (j.contains("grading"))
        c.grading = parse_single(j.at("grading"), "grading");
    if (j.contains("compare")) {
        const Json& b = j.at("compare");
        reject_unknown_keys(b, {"a", "b"}, "compare");
        CompareBlock cb;
        if (!b.contains("a") || !b.contains("b"))
            throw ConfigError("compare", "needs both 'a' and 'b'");
        cb.a = get_field<std::string>(b, "a", "compare");
        cb.b = get_field<std::string>(b, "b", "compare");
        c.compare = cb;
    }
    if (j.contains("simulate")) {
        const Json& b = j.at("simulate");
        const std::string w = "simulate";
        reject_unknown_keys(b,
                            {"t", "p6", "p8", "horizon", "seed", "samples", "epsilon", "density_horizon",
                             "observable", "random_starts", "workers", "csv_stride"},
                            w);
        SimulateBlock s;
        maybe(b, "t", w, s.t);
        maybe(b, "p6", w, s.p6);
        maybe(b, "p8", w, s.p8);
        maybe(b, "horizon", w, s.horizon);
        maybe(b, "seed", w, s.seed);
        maybe(b, "samples", w, s.samples);
        maybe(b, "epsilon", w, s.epsilon);
        maybe(b, "density_horizon", w, s.density_horizon);
        maybe(b, "observable", w, s.observable);
        maybe(b, "random_starts", w, s.random_starts);
        maybe(b, "workers", w, s.workers);
        maybe(b, "csv_stride", w, s.csv_stride);
        c.simulate = s;
    }
    c.validate();
    return c;
}

JobConfig load_config(const std::string& file)
{
    std::ifstream in(file);
    if (!in)
        throw ConfigError("--config", "cannot open '" + file + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

Json to_json(const JobConfig& c)
{
    Json j;
    j["manifold"] = c.manifold;
    Json ds = Json::object();
    for (const auto& d : c.diffeos) {
        Json e;
        Json acts = Json::array();
        for (auto a : d.actions)
            acts.push_back(std::string(to_string(a)));
        e["actions"] = acts;
        e["conjugated"] = d.conjugated;
        ds[d.name] = e;
    }
    j["diffeos"] = ds;
    if (c.pv)
        j["pv"] = {{"diffeo", c.pv->diffeo}};
    if (c.hp)
        j["hp"] = {{"diffeo", c.hp->diffeo}};
    if (c.grading)
        j["grading"] = {{"diffeo", c.grading->diffeo}};
    if (c.compare)
        j["compare"] = {{"a", c.compare->a}, {"b", c.compare->b}};
    if (c.simulate) {
        const auto& s = *c.simulate;
        j["simulate"] = {
            {"t", s.t},
            {"p6", s.p6},
            {"p8", s.p8},
            {"horizon", s.horizon},
            {"seed", s.seed},
            {"samples", s.samples},
            {"epsilon", s.epsilon},
            {"density_horizon", s.density_horizon},
            {"observable", s.observable},
            {"random_starts", s.random_starts},
            {"workers", s.workers},
            {"csv_stride", s.csv_stride},
        };
    }
    return j;
}

std::vector<int> parse_manifold_list(const std::string& s)
{
    std::vector<int> dims;
    if (s.empty() || s == "point")
        return dims;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = s.find(',', start);
        const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument(tok);
            dims.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("--manifold", "expected comma-separated sphere dimensions, got '" + s + "'");
        }
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    SphereProductManifold m{dims};
    try {
        m.validate();
    } catch (const ValidationError& e) {
        throw ConfigError("--manifold", e.what());
    }
    return dims;
}

} // namespace cpinv
