/**
 * Job configuration: a JSON document with the manifold, named descriptors and
 * one optional block per command. Unknown keys are rejected at every level.
 *
 *   {
 *     "manifold": [3, 6, 8],
 *     "diffeos": {
 *       "alpha": {"actions": ["rotation", "antipodal", "identity"]},
 *       "beta":  {"actions": ["rotation", "identity", "antipodal"], "conjugated": true}
 *     },
 *     "pv": {"diffeo": "alpha"},
 *     "hp": {"diffeo": "alpha"},
 *     "grading": {"diffeo": "beta"},
 *     "compare": {"a": "alpha", "b": "beta"},
 *     "simulate": {"t": 0.4142135623730951, "p6": true, "horizon": 100000, ...}
 *   }
 */
#ifndef CPINV_CONFIG_HPP
#define CPINV_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpinv/manifold.hpp"

namespace cpinv {

using Json = nlohmann::ordered_json;

/// Malformed configuration; `field` is a dotted path such as "simulate.seed".
class ConfigError : public ValidationError
{
    public:
        using ValidationError::ValidationError;
};

struct DiffeoEntry
{
    std::string name;
    std::vector<FactorAction> actions;
    bool conjugated = false;

    friend bool operator==(const DiffeoEntry&, const DiffeoEntry&) = default;
};

struct SingleDiffeoBlock
{
    std::string diffeo;
    friend bool operator==(const SingleDiffeoBlock&, const SingleDiffeoBlock&) = default;
};

struct CompareBlock
{
    std::string a;
    std::string b;
    friend bool operator==(const CompareBlock&, const CompareBlock&) = default;
};

struct SimulateBlock
{
    double t = 0.41421356237309503; // sqrt(2) - 1
    bool p6 = true;
    bool p8 = false;
    std::size_t horizon = 100000;
    std::uint64_t seed = 42;
    std::size_t samples = 100000;
    double epsilon = 0.01;
    std::size_t density_horizon = 10000;
    std::string observable = "character_s3";
    std::size_t random_starts = 4;
    unsigned workers = 0;
    std::size_t csv_stride = 1;

    friend bool operator==(const SimulateBlock&, const SimulateBlock&) = default;
};

struct JobConfig
{
    std::vector<int> manifold = {3, 6, 8};
    std::vector<DiffeoEntry> diffeos;
    std::optional<SingleDiffeoBlock> pv;
    std::optional<SingleDiffeoBlock> hp;
    std::optional<SingleDiffeoBlock> grading;
    std::optional<CompareBlock> compare;
    std::optional<SimulateBlock> simulate;

    const DiffeoEntry* find_diffeo(const std::string& name) const;

    /// Descriptor for a named entry; throws ConfigError naming `field` when
    /// the entry does not exist.
    DiffeoDescriptor descriptor(const std::string& name, const std::string& field) const;

    /// Cross-field checks: references resolve, descriptors fit the manifold,
    /// numeric ranges are sane.
    void validate() const;

    friend bool operator==(const JobConfig&, const JobConfig&) = default;
};

JobConfig parse_config(const Json& j);
JobConfig load_config(const std::string& path);
Json to_json(const JobConfig& c);

/// "3,6,8" -> {3,6,8}; "" and "point" give the empty product.
std::vector<int> parse_manifold_list(const std::string& s);

} // namespace cpinv

#endif
