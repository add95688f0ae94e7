/**
 * Report document shared by every subcommand: a human table and a versioned
 * JSON rendering.
 *
 * In the JSON form every number sits inside a tagged node
 * {"value": ..., "source": "computed" | "fixture" | "input"}; fixture nodes
 * also carry a "provenance" ("published" or "derived").
 * `untagged_numbers` checks this structurally.
 */
#ifndef CPINV_REPORT_HPP
#define CPINV_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "cpinv/config.hpp"
#include "cpinv/dynamics.hpp"
#include "cpinv/fixtures.hpp"
#include "cpinv/invariants.hpp"

namespace cpinv {

inline constexpr const char* kReportSchema = "cpinv.report/1";

struct SimulationSummary
{
    dynamics::DynamicsMap map;
    std::vector<std::pair<dynamics::SphereFactor, dynamics::DegreeEstimate>> degrees;
    dynamics::Observable observable = dynamics::Observable::constant;
    dynamics::BirkhoffResult birkhoff;
    std::optional<dynamics::CoverageResult> coverage;
    std::string coverage_note;
};

struct ReportDocument
{
    std::string command;
    Json input;
    SphereProductManifold manifold;
    std::vector<DescriptorInvariants> descriptors;
    std::optional<InvariantReport> comparison;
    std::optional<SimulationSummary> simulation;
    std::vector<std::string> discrepancy_notes;
    std::vector<std::string> assumptions;

    Json to_json() const;
    std::string to_table() const;
};

struct FixtureDiff
{
    std::vector<FixtureComparison> rows;
    std::size_t mismatches = 0;

    Json to_json() const;
    std::string to_text() const;
};

/// Compares every descriptor in the report that matches a stored reference.
FixtureDiff render_fixture_diff(const ReportDocument& report);

/// JSON pointers of numbers that are not inside a tagged node.
std::vector<std::string> untagged_numbers(const Json& doc);

Json tagged(Json value, const char* source = "computed");
Json group_json(const AbelianGroup& g);

/// CSV rows "n,re,im,abs,max_deviation" for the first start point, every
/// `stride` steps (the final step is always written).
std::string birkhoff_csv(const dynamics::BirkhoffResult& r, std::size_t stride);

} // namespace cpinv

#endif
