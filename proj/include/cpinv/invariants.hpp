/**
 * Crossed-product invariants of a sphere-product diffeomorphism.
 *
 * K-theory of C(M) x| Z from the Pimsner-Voiculescu sequence over Z,
 * periodic cyclic cohomology of C^inf(M) x| Z from Nest's sequence over a
 * characteristic-0 field, and the E_inf grading computed in a finite model:
 * the action on H_*(M) itself, with zero differential, stands in for the
 * action on de Rham currents.
 */
#ifndef CPINV_INVARIANTS_HPP
#define CPINV_INVARIANTS_HPP

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpinv/linalg.hpp"
#include "cpinv/manifold.hpp"

namespace cpinv {

/// A computed quantity broke one of its own structural invariants.
class InvariantViolation : public std::logic_error
{
    public:
        using std::logic_error::logic_error;
};

inline constexpr const char* kPositiveConeNote =
    "K0 is ordered; the positive cone is determined by traces (not computed here)";
inline constexpr const char* kGradingModelTag = "homology-level zero-differential model";
inline constexpr const char* kChernCharacterNote =
    "K-theoretic action identified with the cohomological action under the even/odd collapse "
    "(Chern character; sphere-product cohomology is torsion-free)";

struct CrossedProductKTheory
{
    AbelianGroup k0;
    AbelianGroup k1;
    AbelianGroup k0_coker_part; // coker(1 - a on K0)
    AbelianGroup k0_ker_part;   // ker(1 - a on K1)
    AbelianGroup k1_coker_part; // coker(1 - a on K1)
    AbelianGroup k1_ker_part;   // ker(1 - a on K0)
    std::string positive_cone_note = kPositiveConeNote;

    friend bool operator==(const CrossedProductKTheory&, const CrossedProductKTheory&) = default;
};

/**
 * Runs the six-term sequence
 *
 *   0 -> coker(1-a on K_i) -> K_i(C(M) x| Z) -> ker(1-a on K_{1-i}) -> 0.
 *
 * The kernel term is a subgroup of a free group, so every extension splits.
 * Throws std::invalid_argument for torsion in the input groups or for shape
 * mismatches.
 */
CrossedProductKTheory pv_k_theory(const AbelianGroup& k0, const AbelianGroup& k1,
                                  const IntMatrix& action_k0, const IntMatrix& action_k1);

/// Convenience wrapper: K-theory of C(M) with the induced action of phi.
CrossedProductKTheory crossed_product_k_theory(const SphereProductManifold& m, const DiffeoDescriptor& phi);

struct PeriodicCyclicCohomology
{
    std::size_t hp_even_dim = 0;
    std::size_t hp_odd_dim = 0;
    friend bool operator==(const PeriodicCyclicCohomology&, const PeriodicCyclicCohomology&) = default;
};

/**
 * Dimensions around Nest's six-term sequence, in cyclic order
 *
 *   HP_ev(M) -(1-a)-> HP_ev(M) -> HP_od(crossed) -> HP_od(M) -(1-a)-> HP_od(M)
 *            -> HP_ev(crossed) -> (back to the start)
 *
 * with `map_ranks[i]` the rank of the map leaving `node_dims[i]`.
 */
struct SixTermDims
{
    std::array<std::size_t, 6> node_dims{};
    std::array<std::size_t, 6> map_ranks{};

    long alternating_sum() const;
    /// dim V_i = rank(in) + rank(out) at every node.
    bool is_exact() const;
};

SixTermDims nest_six_term(const GradedAbelianGroup& h, const GradedEndomorphism& action);

/// Throws InvariantViolation if the assembled six-term sequence is not exact.
PeriodicCyclicCohomology nest_hp(const GradedAbelianGroup& h, const GradedEndomorphism& action);

struct GradingStructure
{
    std::map<int, std::size_t> eq_dims;
    std::map<int, std::size_t> coeq_dims;
    std::map<int, std::size_t> e_infty_dims;
    std::set<int> odd_support;
    std::string model_tag = kGradingModelTag;

    std::size_t total_e_infty() const;
    std::set<int> support() const;

    friend bool operator==(const GradingStructure&, const GradingStructure&) = default;
};

/// eq = ker(1-a), coeq = coker(1-a) on each H_n; E_inf^n = eq^n + coeq^{n-1}.
GradingStructure grading_structure(const GradedAbelianGroup& h, const GradedEndomorphism& action);

enum class Verdict
{
    indistinguishable,
    distinguished,
};

std::string to_string(Verdict v);

struct DescriptorInvariants
{
    DiffeoDescriptor descriptor;
    GradedEndomorphism induced;
    CrossedProductKTheory k_theory;
    PeriodicCyclicCohomology hp;
    GradingStructure grading;

    friend bool operator==(const DescriptorInvariants&, const DescriptorInvariants&) = default;
};

DescriptorInvariants compute_invariants(const SphereProductManifold& m, const DiffeoDescriptor& phi);

struct InvariantReport
{
    SphereProductManifold manifold;
    DescriptorInvariants first;
    DescriptorInvariants second;
    Verdict cstar_verdict = Verdict::indistinguishable;
    Verdict smooth_verdict = Verdict::indistinguishable;
    std::vector<std::string> discrepancy_notes;

    friend bool operator==(const InvariantReport&, const InvariantReport&) = default;
};

/**
 * C*-verdict compares the crossed-product K-groups; smooth verdict compares
 * the odd support of the E_inf grading. The two pipelines run concurrently.
 */
InvariantReport compare_invariants(const DiffeoDescriptor& d1, const DiffeoDescriptor& d2,
                                   const SphereProductManifold& m);

} // namespace cpinv

#endif
