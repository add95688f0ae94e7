/**
 * Golden values for the S^3 x S^6 x S^8 instance.
 *
 * The two reference diffeomorphisms are recognised by their induced action on
 * homology, not by label. Each value carries where it came from: "published"
 * values are the ones stated for the instance in the literature, "derived"
 * values were recomputed independently (SNF by hand, subset enumeration).
 */
#ifndef CPINV_FIXTURES_HPP
#define CPINV_FIXTURES_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cpinv/invariants.hpp"

namespace cpinv {

enum class Provenance
{
    published,
    derived,
};

std::string to_string(Provenance p);

struct ReferenceInstance
{
    std::string name;
    std::map<int, int> induced_signs;
    std::size_t k_free_rank = 0;
    std::size_t hp_even_dim = 0;
    std::size_t hp_odd_dim = 0;
    std::set<int> odd_support;
    std::set<int> eq_support;
    std::set<int> coeq_support;
    std::string derived_k_torsion;
    std::string source_note;
};

/// The manifold the fixtures describe.
SphereProductManifold reference_manifold();

const std::vector<ReferenceInstance>& reference_instances();

/// Reference entry whose induced signs equal `induced` on the reference
/// manifold, if any.
const ReferenceInstance* match_reference(const SphereProductManifold& m, const GradedEndomorphism& induced);

struct FixtureComparison
{
    std::string descriptor;
    std::string reference;
    std::string quantity;
    std::string computed;
    std::string expected;
    Provenance provenance = Provenance::published;
    bool match = true;
    std::string note;

    std::string describe() const;
};

/// Empty when the manifold or the action has no stored reference.
std::vector<FixtureComparison> compare_with_fixtures(const SphereProductManifold& m, const DescriptorInvariants& inv);

std::string format_set(const std::set<int>& s);

} // namespace cpinv

#endif
