#include <algorithm>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "cpinv/manifold.hpp"
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

std::map<int, std::size_t> ranks(const GradedAbelianGroup& h)
{
    std::map<int, std::size_t> out;
    for (const auto& [d, g] : h.groups)
        if (g.free_rank != 0)
            out[d] = g.free_rank;
    return out;
}

std::vector<long> diag_entries(const IntMatrix& m)
{
    std::vector<long> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        out.push_back(m(i, i).get_si());
    return out;
}

DiffeoDescriptor random_descriptor(std::mt19937_64& rng, const SphereProductManifold& m)
{
    DiffeoDescriptor d;
    std::uniform_int_distribution<int> pick(0, 2);
    for (int n : m.factor_dims) {
        auto a = static_cast<FactorAction>(pick(rng));
        if (a == FactorAction::rotation && n % 2 == 0)
            a = FactorAction::identity;
        d.per_factor.push_back(a);
    }
    return d;
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

} // namespace

TEST_CASE("kunneth homology of S3 x S6 x S8")
{
    const auto h = kunneth_homology(kM);
    REQUIRE(ranks(h) == oracle::poincare_polynomial({3, 6, 8}));
    std::vector<int> degrees;
    for (const auto& c : kM.kunneth_basis())
        degrees.push_back(c.degree);
    REQUIRE(degrees == std::vector<int>{0, 3, 6, 8, 9, 11, 14, 17});
    REQUIRE(h.total_rank() == 8);
    for (const auto& [d, g] : h.groups)
        REQUIRE(g.torsion.empty());
}

TEST_CASE("kunneth homology of a point and of S3 x S3")
{
    const SphereProductManifold point{};
    REQUIRE(ranks(kunneth_homology(point)) == std::map<int, std::size_t>{{0, 1}});
    REQUIRE(point.total_dim() == 0);

    const SphereProductManifold s3s3{{3, 3}};
    const auto h = kunneth_homology(s3s3);
    REQUIRE(ranks(h) == oracle::poincare_polynomial({3, 3}));
    REQUIRE(h.rank(3) == 2);
}

TEST_CASE("random products: total rank and Poincare duality")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = random_manifold(rng, 6);
        const auto h = kunneth_homology(m);
        REQUIRE(h.total_rank() == (std::size_t{1} << m.num_factors()));
        REQUIRE(ranks(h) == oracle::poincare_polynomial(m.factor_dims));
        const int top = m.total_dim();
        for (int d = 0; d <= top; ++d)
            REQUIRE(h.rank(d) == h.rank(top - d));
    }
}

TEST_CASE("manifold validation")
{
    REQUIRE_THROWS_AS((SphereProductManifold{{3, 0}}.validate()), ValidationError);
    REQUIRE_THROWS_AS((SphereProductManifold{{-1}}.validate()), ValidationError);
    REQUIRE_NOTHROW(kM.validate());
}

TEST_CASE("induced signs of the two reference diffeomorphisms")
{
    const std::map<int, long> alpha_signs{{0, 1}, {3, 1}, {6, -1}, {8, 1}, {9, -1}, {11, 1}, {14, -1}, {17, -1}};
    const std::map<int, long> beta_signs{{0, 1}, {3, 1}, {6, 1}, {8, -1}, {9, 1}, {11, -1}, {14, -1}, {17, -1}};

    const auto a = induced_graded_map(kM, alpha());
    const auto b = induced_graded_map(kM, beta());
    for (const auto& [d, s] : alpha_signs)
        REQUIRE(a.at(d) == IntMatrix{{s}});
    for (const auto& [d, s] : beta_signs)
        REQUIRE(b.at(d) == IntMatrix{{s}});
    REQUIRE(a.matches(kunneth_homology(kM)));
    REQUIRE(a.at(5).empty());
}

TEST_CASE("identity and conjugation induce the identity on homology")
{
    const auto id = induced_graded_map(kM, DiffeoDescriptor::identity(kM));
    for (const auto& [d, mat] : id.maps)
        REQUIRE(mat == IntMatrix::identity(mat.rows()));

    DiffeoDescriptor conj = alpha();
    conj.conjugated = true;
    REQUIRE(induced_graded_map(kM, conj) == induced_graded_map(kM, alpha()));
}

TEST_CASE("factor degrees")
{
    REQUIRE(factor_degree(FactorAction::antipodal, 6) == -1);
    REQUIRE(factor_degree(FactorAction::antipodal, 8) == -1);
    REQUIRE(factor_degree(FactorAction::antipodal, 3) == 1);
    REQUIRE(factor_degree(FactorAction::rotation, 3) == 1);
    REQUIRE(factor_degree(FactorAction::identity, 6) == 1);
}

TEST_CASE("descriptor validation")
{
    DiffeoDescriptor bad{{FactorAction::identity, FactorAction::rotation, FactorAction::identity}, "bad", false};
    REQUIRE_THROWS_AS(bad.validate(kM), ValidationError);
    try {
        bad.validate(kM);
    } catch (const ValidationError& e) {
        REQUIRE(e.field() == "bad[1]");
    }
    DiffeoDescriptor short_one{{FactorAction::identity}, "short", false};
    REQUIRE_THROWS_AS(short_one.validate(kM), ValidationError);
    REQUIRE_NOTHROW(alpha().validate(kM));
    REQUIRE_NOTHROW(beta().validate(kM));
}

TEST_CASE("action list parsing")
{
    REQUIRE(parse_action_list("rotation,antipodal,identity") == alpha().per_factor);
    REQUIRE(parse_action_list("rot,id,anti") == beta().per_factor);
    REQUIRE(parse_action_list("").empty());
    REQUIRE(format_action_list(alpha().per_factor) == "rotation,antipodal,identity");
    REQUIRE_THROWS_AS(parse_action_list("rotation,flip"), ValidationError);
}

TEST_CASE("involutions square to the identity on homology")
{
    for (const auto& d : {alpha(), beta()}) {
        const auto a = induced_graded_map(kM, d);
        const auto sq = a * a;
        for (const auto& [deg, mat] : sq.maps)
            REQUIRE(mat == IntMatrix::identity(mat.rows()));
    }
}

TEST_CASE("induced maps are functorial under composition")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = random_manifold(rng, 5);
        const auto f = random_descriptor(rng, m);
        const auto g = random_descriptor(rng, m);
        REQUIRE_NOTHROW(f.validate(m));
        const auto fg = compose(f, g, m);
        REQUIRE(induced_graded_map(m, fg) == induced_graded_map(m, f) * induced_graded_map(m, g));
    }
}

TEST_CASE("K-theory of the space")
{
    const auto k = k_theory_of_space(kM);
    REQUIRE(k.k0 == AbelianGroup::free(4));
    REQUIRE(k.k1 == AbelianGroup::free(4));
    REQUIRE(k.even_cells.size() == 4);
    REQUIRE(k.odd_cells.size() == 4);

    const auto p = k_theory_of_space(SphereProductManifold{});
    REQUIRE(p.k0 == AbelianGroup::free(1));
    REQUIRE(p.k1.is_trivial());

    const auto s3 = k_theory_of_space(SphereProductManifold{{3}});
    REQUIRE(s3.k0 == AbelianGroup::free(1));
    REQUIRE(s3.k1 == AbelianGroup::free(1));
}

TEST_CASE("parity collapse of the reference actions")
{
    const auto a = induced_graded_map(kM, alpha());
    const auto b = induced_graded_map(kM, beta());
    for (int parity : {0, 1}) {
        const IntMatrix ca = collapse_parity(a, parity);
        const IntMatrix cb = collapse_parity(b, parity);
        REQUIRE(ca.is_diagonal());
        REQUIRE(cb.is_diagonal());
        auto ea = diag_entries(ca);
        auto eb = diag_entries(cb);
        std::sort(ea.begin(), ea.end());
        std::sort(eb.begin(), eb.end());
        // Both are conjugate to diag(1,-1,1,-1) by a permutation.
        REQUIRE(ea == std::vector<long>{-1, -1, 1, 1});
        REQUIRE(eb == ea);
    }
    REQUIRE(diag_entries(collapse_parity(a, 0)) == std::vector<long>{1, -1, 1, -1});
}
