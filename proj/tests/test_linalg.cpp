#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "cpinv/linalg.hpp"
#include "oracles.hpp"

using namespace cpinv;

namespace {

IntMatrix from_dense(const oracle::Dense& d, std::size_t rows, std::size_t cols)
{
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = static_cast<long>(d[i][j]);
    return m;
}

std::vector<Integer> ints(std::initializer_list<long> v)
{
    return {v.begin(), v.end()};
}

// Every SnfDecomposition invariant, checked exactly.
void check_snf(const IntMatrix& m, const SnfDecomposition& s)
{
    REQUIRE(s.U.rows() == m.rows());
    REQUIRE(s.V.cols() == m.cols());
    REQUIRE(s.U * m * s.V == s.D);
    REQUIRE(abs(determinant(s.U)) == 1);
    REQUIRE(abs(determinant(s.V)) == 1);
    REQUIRE(s.D.is_diagonal());
    const auto d = s.invariant_factors();
    for (std::size_t i = 0; i < d.size(); ++i) {
        REQUIRE(d[i] >= 0);
        if (i + 1 < d.size() && d[i + 1] != 0)
            REQUIRE(mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t()));
        if (d[i] == 0)
            for (std::size_t j = i; j < d.size(); ++j)
                REQUIRE(d[j] == 0);
    }
}

} // namespace

TEST_CASE("smith normal form of the identity is the identity")
{
    const IntMatrix id = IntMatrix::identity(3);
    const auto s = smith_normal_form(id);
    check_snf(id, s);
    REQUIRE(s.D == id);
}

TEST_CASE("smith normal form moves zeros after the invariant factors")
{
    const IntMatrix m = IntMatrix::diagonal({0, 2, 0, 2});
    const auto s = smith_normal_form(m);
    check_snf(m, s);
    REQUIRE(s.D == IntMatrix::diagonal({2, 2, 0, 0}));

    const oracle::Dense dense{{0, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 2}};
    REQUIRE(oracle::invariant_factors(dense, 4, 4) == std::vector<long long>{2, 2, 0, 0});
}

TEST_CASE("smith normal form matches determinantal divisors on a 2x2")
{
    const IntMatrix m{{2, 4}, {6, 8}};
    const auto s = smith_normal_form(m);
    check_snf(m, s);
    // d1 = gcd(2,4,6,8) = 2, d1 d2 = |det| = 8
    REQUIRE(oracle::invariant_factors({{2, 4}, {6, 8}}, 2, 2) == std::vector<long long>{2, 4});
    REQUIRE(s.D == IntMatrix::diagonal({2, 4}));
}

TEST_CASE("empty matrices follow the trivial-group conventions")
{
    const IntMatrix into_zero(0, 3); // Z^3 -> Z^0
    const IntMatrix from_zero(3, 0); // Z^0 -> Z^3

    check_snf(into_zero, smith_normal_form(into_zero));
    check_snf(from_zero, smith_normal_form(from_zero));
    REQUIRE(cokernel(into_zero).is_trivial());
    REQUIRE(kernel_rank(into_zero) == 3);
    REQUIRE(cokernel(from_zero) == AbelianGroup::free(3));
    REQUIRE(kernel_rank(from_zero) == 0);
    REQUIRE(field_ker_coker_dims(from_zero) == FieldKerCoker{0, 3});
    REQUIRE(cokernel(IntMatrix(0, 0)).is_trivial());
}

TEST_CASE("cokernel examples")
{
    REQUIRE(cokernel(IntMatrix::zero(2, 2)) == AbelianGroup::free(2));
    REQUIRE(cokernel(IntMatrix::diagonal({0, 2, 0, 2})) == AbelianGroup{2, ints({2, 2})});
    REQUIRE(cokernel(IntMatrix::diagonal({1, 1})).is_trivial());
    // Z/2 + Z/3 is cyclic of order 6
    REQUIRE(cokernel(IntMatrix::diagonal({2, 3})) == AbelianGroup{0, ints({6})});
    // Non-square: Z^3 / <(2,0,0),(0,4,0)>
    REQUIRE(cokernel(IntMatrix{{2, 0}, {0, 4}, {0, 0}}) == AbelianGroup{1, ints({2, 4})});
}

TEST_CASE("kernel rank examples")
{
    REQUIRE(kernel_rank(IntMatrix::diagonal({0, 2, 0, 2})) == 2);
    REQUIRE(kernel_rank(IntMatrix::identity(5)) == 0);
    REQUIRE(kernel_rank(IntMatrix::zero(3, 3)) == 3);
}

TEST_CASE("field kernel and cokernel dimensions")
{
    REQUIRE(field_ker_coker_dims(IntMatrix::diagonal({0, 2, 0, 2})) == FieldKerCoker{2, 2});
    REQUIRE(field_ker_coker_dims(IntMatrix::identity(4)) == FieldKerCoker{0, 0});
    REQUIRE(field_ker_coker_dims(IntMatrix::zero(4, 4)) == FieldKerCoker{4, 4});
    // 2 is invertible over Q even though coker over Z is Z/2
    REQUIRE(field_ker_coker_dims(IntMatrix{{2}}) == FieldKerCoker{0, 0});
}

TEST_CASE("abelian group canonical form")
{
    REQUIRE(AbelianGroup::from_cyclic_orders(ints({2, 3})) == AbelianGroup{0, ints({6})});
    REQUIRE(AbelianGroup::from_cyclic_orders(ints({4, 2, 1, 0})) == AbelianGroup{1, ints({2, 4})});
    REQUIRE(AbelianGroup::from_cyclic_orders(ints({6, 4})) == AbelianGroup{0, ints({2, 12})});
    REQUIRE(direct_sum(AbelianGroup{1, ints({2})}, AbelianGroup{2, ints({3})}) == AbelianGroup{3, ints({6})});
    REQUIRE(AbelianGroup{4, ints({2, 2})}.to_string() == "Z^4 + Z/2 + Z/2");
    REQUIRE(AbelianGroup{}.to_string() == "0");
    REQUIRE(AbelianGroup::free(1).to_string() == "Z");
    REQUIRE_THROWS_AS(AbelianGroup::from_cyclic_orders(ints({-2})), std::invalid_argument);
}

TEST_CASE("determinant agrees with cofactor expansion")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto d = oracle::random_dense(rng, n, n, 9);
        REQUIRE(determinant(from_dense(d, n, n)) == Integer(static_cast<long>(oracle::cofactor_det(d))));
    }
}

TEST_CASE("random matrices: SNF invariants, oracle factors and ranks")
{
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<std::size_t> size(1, 5);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t rows = size(rng);
        const std::size_t cols = size(rng);
        const auto dense = oracle::random_dense(rng, rows, cols, 9);
        const IntMatrix m = from_dense(dense, rows, cols);
        const auto s = smith_normal_form(m);
        check_snf(m, s);

        const auto expected = oracle::invariant_factors(dense, rows, cols);
        const auto got = s.invariant_factors();
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            REQUIRE(got[i] == Integer(static_cast<long>(expected[i])));

        REQUIRE(s.rank() == rational_rank(m));
        REQUIRE(s.rank() == oracle::minor_rank(dense, rows, cols));

        const auto f = field_ker_coker_dims(m);
        REQUIRE(static_cast<long>(f.ker_dim) - static_cast<long>(f.coker_dim) ==
                static_cast<long>(cols) - static_cast<long>(rows));

        // Same input, same bits.
        const auto again = smith_normal_form(m);
        REQUIRE(again.U == s.U);
        REQUIRE(again.D == s.D);
        REQUIRE(again.V == s.V);
        REQUIRE(cokernel(m) == cokernel(m));
    }
}

TEST_CASE("sparse low-rank matrices hit the zero-block path")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        auto dense = oracle::random_dense(rng, 4, 5, 9);
        for (auto& row : dense)
            for (auto& v : row)
                if (coin(rng) != 0)
                    v = 0;
        const IntMatrix m = from_dense(dense, 4, 5);
        const auto s = smith_normal_form(m);
        check_snf(m, s);
        REQUIRE(s.rank() == oracle::minor_rank(dense, 4, 5));
    }
}

TEST_CASE("entries beyond 64 bits stay exact")
{
    const Integer big("123456789012345678901234567890");
    IntMatrix m(3, 3);
    m(0, 0) = big;
    m(0, 1) = big + 1;
    m(1, 0) = big * 3;
    m(1, 1) = big * 2 - 7;
    m(2, 2) = big * big;
    const auto s = smith_normal_form(m);
    check_snf(m, s);
    const auto d = s.invariant_factors();
    Integer prod = 1;
    for (const auto& x : d)
        prod *= x;
    REQUIRE(prod == abs(determinant(m)));
}
