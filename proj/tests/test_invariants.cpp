#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "cpinv/fixtures.hpp"
#include "cpinv/invariants.hpp"
#include "oracles.hpp"

using namespace cpinv;

namespace {

const SphereProductManifold kM{{3, 6, 8}};

DiffeoDescriptor alpha()
{
    return {{FactorAction::rotation, FactorAction::antipodal, FactorAction::identity}, "alpha", false};
}

DiffeoDescriptor beta()
{
    return {{FactorAction::rotation, FactorAction::identity, FactorAction::antipodal}, "beta", false};
}

std::vector<Integer> ints(std::initializer_list<long> v)
{
    return {v.begin(), v.end()};
}

// Signs recomputed from scratch: for each subset, (-1)^(#antipodal factors of
// even dimension in it).
struct SignCount
{
    std::map<int, std::size_t> fixed;
    std::map<int, std::size_t> flipped;
};

SignCount count_signs(const SphereProductManifold& m, const DiffeoDescriptor& d)
{
    SignCount c;
    const std::size_t k = m.factor_dims.size();
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
        int deg = 0;
        int sign = 1;
        for (std::size_t i = 0; i < k; ++i)
            if ((s >> i) & 1u) {
                deg += m.factor_dims[i];
                if (d.per_factor[i] == FactorAction::antipodal && m.factor_dims[i] % 2 == 0)
                    sign = -sign;
            }
        (sign == 1 ? c.fixed : c.flipped)[deg] += 1;
    }
    return c;
}

std::size_t parity_sum(const std::map<int, std::size_t>& m, int parity)
{
    std::size_t s = 0;
    for (const auto& [d, n] : m)
        if (d % 2 == parity)
            s += n;
    return s;
}

SphereProductManifold random_manifold(std::mt19937_64& rng, std::size_t max_factors)
{
    std::uniform_int_distribution<std::size_t> k(0, max_factors);
    std::uniform_int_distribution<int> dim(1, 9);
    SphereProductManifold m;
    const std::size_t n = k(rng);
    for (std::size_t i = 0; i < n; ++i)
        m.factor_dims.push_back(dim(rng));
    return m;
}

DiffeoDescriptor random_descriptor(std::mt19937_64& rng, const SphereProductManifold& m)
{
    DiffeoDescriptor d;
    d.label = "random";
    std::uniform_int_distribution<int> pick(0, 2);
    for (int n : m.factor_dims) {
        auto a = static_cast<FactorAction>(pick(rng));
        if (a == FactorAction::rotation && n % 2 == 0)
            a = FactorAction::antipodal;
        d.per_factor.push_back(a);
    }
    return d;
}

} // namespace

TEST_CASE("PV K-theory of the first reference diffeomorphism")
{
    const auto k = crossed_product_k_theory(kM, alpha());
    REQUIRE(k.k0 == AbelianGroup{4, ints({2, 2})});
    REQUIRE(k.k1 == AbelianGroup{4, ints({2, 2})});
    REQUIRE(k.k0_coker_part == AbelianGroup{2, ints({2, 2})});
    REQUIRE(k.k0_ker_part == AbelianGroup::free(2));
    REQUIRE(k.k1.free_rank == 4);
    REQUIRE(k.positive_cone_note == kPositiveConeNote);

    const auto kb = crossed_product_k_theory(kM, beta());
    REQUIRE(kb == k);
}

TEST_CASE("PV K-theory on a point")
{
    const auto trivial = pv_k_theory(AbelianGroup::free(1), AbelianGroup{}, IntMatrix::identity(1), IntMatrix(0, 0));
    REQUIRE(trivial.k0 == AbelianGroup::free(1));
    REQUIRE(trivial.k1 == AbelianGroup::free(1));

    const auto flip = pv_k_theory(AbelianGroup::free(1), AbelianGroup{}, IntMatrix{{-1}}, IntMatrix(0, 0));
    REQUIRE(flip.k0 == AbelianGroup{0, ints({2})});
    REQUIRE(flip.k1.is_trivial());
}

TEST_CASE("PV rejects torsion inputs and mismatched shapes")
{
    REQUIRE_THROWS_AS(pv_k_theory(AbelianGroup{1, ints({2})}, AbelianGroup{}, IntMatrix::identity(1), IntMatrix(0, 0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(pv_k_theory(AbelianGroup::free(2), AbelianGroup{}, IntMatrix::identity(1), IntMatrix(0, 0)),
                      std::invalid_argument);
}

TEST_CASE("PV free ranks follow rank-nullity for arbitrary integer actions")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> size(0, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n0 = size(rng), n1 = size(rng);
        const auto d0 = oracle::random_dense(rng, n0, n0, 3);
        const auto d1 = oracle::random_dense(rng, n1, n1, 3);
        IntMatrix a0(n0, n0), a1(n1, n1);
        oracle::Dense m0 = d0, m1 = d1;
        for (std::size_t i = 0; i < n0; ++i)
            for (std::size_t j = 0; j < n0; ++j) {
                a0(i, j) = static_cast<long>(d0[i][j]);
                m0[i][j] = (i == j ? 1 : 0) - d0[i][j];
            }
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n1; ++j) {
                a1(i, j) = static_cast<long>(d1[i][j]);
                m1[i][j] = (i == j ? 1 : 0) - d1[i][j];
            }
        const std::size_t r0 = oracle::minor_rank(m0, n0, n0);
        const std::size_t r1 = oracle::minor_rank(m1, n1, n1);
        const auto k = pv_k_theory(AbelianGroup::free(n0), AbelianGroup::free(n1), a0, a1);
        // Over Q, coker and ker of 1-a have the same dimension.
        REQUIRE(k.k0.free_rank == (n0 - r0) + (n1 - r1));
        REQUIRE(k.k1.free_rank == k.k0.free_rank);
        REQUIRE(k.k0_ker_part.torsion.empty());
        REQUIRE(k.k1_ker_part.torsion.empty());
    }
}

TEST_CASE("HP dimensions of the reference instances and of a point")
{
    const auto h = kunneth_homology(kM);
    REQUIRE(nest_hp(h, induced_graded_map(kM, alpha())) == PeriodicCyclicCohomology{4, 4});
    REQUIRE(nest_hp(h, induced_graded_map(kM, beta())) == PeriodicCyclicCohomology{4, 4});

    const SphereProductManifold point{};
    REQUIRE(nest_hp(kunneth_homology(point), induced_graded_map(point, DiffeoDescriptor::identity(point))) ==
            PeriodicCyclicCohomology{1, 1});
}

TEST_CASE("six-term sequence for the reference instance")
{
    const auto six = nest_six_term(kunneth_homology(kM), induced_graded_map(kM, alpha()));
    REQUIRE(six.is_exact());
    REQUIRE(six.alternating_sum() == 0);
    REQUIRE(six.node_dims == std::array<std::size_t, 6>{4, 4, 4, 4, 4, 4});
    // 1-a has rank 2 on both parities
    REQUIRE(six.map_ranks[0] == 2);
    REQUIRE(six.map_ranks[3] == 2);
}

TEST_CASE("E_inf grading of the reference instances")
{
    const auto h = kunneth_homology(kM);
    const auto ga = grading_structure(h, induced_graded_map(kM, alpha()));
    const auto gb = grading_structure(h, induced_graded_map(kM, beta()));
    REQUIRE(ga.odd_support == std::set<int>{1, 3, 9, 11});
    REQUIRE(gb.odd_support == std::set<int>{1, 3, 7, 9});
    REQUIRE(ga.support() == std::set<int>{0, 1, 3, 4, 8, 9, 11, 12});
    REQUIRE(gb.support() == std::set<int>{0, 1, 3, 4, 6, 7, 9, 10});
    REQUIRE(ga.total_e_infty() == 8);
    REQUIRE(ga.model_tag == kGradingModelTag);
}

TEST_CASE("identity action: eq and coeq are all of homology")
{
    const auto h = kunneth_homology(kM);
    const auto g = grading_structure(h, induced_graded_map(kM, DiffeoDescriptor::identity(kM)));
    for (const auto& [d, grp] : h.groups) {
        REQUIRE(g.eq_dims.at(d) == grp.free_rank);
        REQUIRE(g.coeq_dims.at(d) == grp.free_rank);
    }
    REQUIRE(g.total_e_infty() == 16);
}

TEST_CASE("compare: the reference pair")
{
    const auto r = compare_invariants(alpha(), beta(), kM);
    REQUIRE(r.cstar_verdict == Verdict::indistinguishable);
    REQUIRE(r.smooth_verdict == Verdict::distinguished);
    REQUIRE(to_string(r.smooth_verdict) == "distinguished");
    REQUIRE(to_string(r.cstar_verdict) == "indistinguishable-by-these-invariants");
    REQUIRE_FALSE(r.discrepancy_notes.empty());
}

TEST_CASE("compare: a descriptor against itself and against its conjugate")
{
    const auto same = compare_invariants(alpha(), alpha(), kM);
    REQUIRE(same.cstar_verdict == Verdict::indistinguishable);
    REQUIRE(same.smooth_verdict == Verdict::indistinguishable);

    DiffeoDescriptor conj = alpha();
    conj.label = "alpha-conj";
    conj.conjugated = true;
    const auto c = compare_invariants(alpha(), conj, kM);
    REQUIRE(c.smooth_verdict == Verdict::indistinguishable);
    REQUIRE(c.first.grading == c.second.grading);
}

TEST_CASE("compare: identity against the first reference diffeomorphism")
{
    const auto r = compare_invariants(DiffeoDescriptor::identity(kM), alpha(), kM);
    REQUIRE(r.cstar_verdict == Verdict::distinguished);
    REQUIRE(r.smooth_verdict == Verdict::distinguished);
    REQUIRE(r.first.k_theory.k0 == AbelianGroup::free(8));
}

TEST_CASE("random actions: invariants agree with direct counting")
{
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 250; ++trial) {
        const auto m = random_manifold(rng, 4);
        const auto d = random_descriptor(rng, m);
        const auto inv = compute_invariants(m, d);
        const auto c = count_signs(m, d);

        std::size_t fixed = 0;
        for (const auto& [deg, n] : c.fixed)
            fixed += n;
        REQUIRE(inv.hp.hp_even_dim == fixed);
        REQUIRE(inv.hp.hp_odd_dim == fixed);
        REQUIRE(inv.grading.total_e_infty() == 2 * fixed);

        const auto six = nest_six_term(kunneth_homology(m), inv.induced);
        REQUIRE(six.is_exact());
        REQUIRE(six.alternating_sum() == 0);

        const std::size_t fe = parity_sum(c.fixed, 0), fo = parity_sum(c.fixed, 1);
        const std::size_t ne = parity_sum(c.flipped, 0), no = parity_sum(c.flipped, 1);
        REQUIRE(inv.k_theory.k0 == AbelianGroup{fe + fo, std::vector<Integer>(ne, 2)});
        REQUIRE(inv.k_theory.k1 == AbelianGroup{fe + fo, std::vector<Integer>(no, 2)});

        std::set<int> odd;
        for (int n = 1; n <= m.total_dim() + 1; n += 2) {
            const std::size_t here = c.fixed.count(n) ? c.fixed.at(n) : 0;
            const std::size_t below = c.fixed.count(n - 1) ? c.fixed.at(n - 1) : 0;
            if (here + below > 0)
                odd.insert(n);
        }
        REQUIRE(inv.grading.odd_support == odd);

        REQUIRE(compute_invariants(m, d) == inv);
    }
}

TEST_CASE("fixture comparison rows")
{
    const auto inv = compute_invariants(kM, alpha());
    const auto rows = compare_with_fixtures(kM, inv);
    REQUIRE(rows.size() == 11);
    std::size_t mismatches = 0;
    for (const auto& r : rows) {
        REQUIRE(r.reference == "alpha");
        if (!r.match)
            ++mismatches;
        if (r.quantity == "K0 torsion" && r.provenance == Provenance::derived)
            REQUIRE(r.match);
        if (r.quantity == "K0 torsion" && r.provenance == Provenance::published) {
            REQUIRE_FALSE(r.match);
            REQUIRE(r.computed == "Z/2 + Z/2");
        }
        if (r.quantity == "HP (even, odd)" || r.quantity == "E_inf odd support" || r.quantity == "K0 free rank")
            REQUIRE(r.match);
    }
    // torsion (K0, K1), even support, eq support, coeq support
    REQUIRE(mismatches == 5);

    // Recognised by action, not by label.
    DiffeoDescriptor renamed = beta();
    renamed.label = "other";
    const auto rb = compare_with_fixtures(kM, compute_invariants(kM, renamed));
    REQUIRE(rb.front().reference == "beta");
    REQUIRE(rb.front().descriptor == "other");

    REQUIRE(compare_with_fixtures(SphereProductManifold{{3}}, compute_invariants(SphereProductManifold{{3}},
                                                                                DiffeoDescriptor::identity(
                                                                                    SphereProductManifold{{3}})))
                .empty());
}
