/**
 * Exact integer and rational linear algebra.
 *
 * Dense matrices of GMP integers, Smith normal form with transforms, and
 * finitely generated abelian groups in invariant-factor form. Everything in
 * here is a pure function of its arguments.
 */
#ifndef CPINV_LINALG_HPP
#define CPINV_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cpinv {

using Integer = mpz_class;
using Rational = mpq_class;

/**
 * Dense integer matrix, row-major. Shapes with zero rows or zero columns are
 * legal and represent maps out of or into the trivial group.
 */
class IntMatrix
{
    public:
        IntMatrix() = default;
        IntMatrix(std::size_t rows, std::size_t cols);
        IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

        static IntMatrix identity(std::size_t n);
        static IntMatrix zero(std::size_t rows, std::size_t cols);
        static IntMatrix diagonal(const std::vector<Integer>& entries);
        static IntMatrix diagonal(std::initializer_list<long> entries);

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        bool empty() const { return rows_ == 0 || cols_ == 0; }
        bool is_square() const { return rows_ == cols_; }

        Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
        const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

        const std::vector<Integer>& entries() const { return entries_; }

        bool is_diagonal() const;
        IntMatrix transposed() const;

        void swap_rows(std::size_t a, std::size_t b);
        void swap_cols(std::size_t a, std::size_t b);
        // row[dst] += factor * row[src]
        void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
        void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
        void negate_row(std::size_t r);

        friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

        std::string to_string() const;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<Integer> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);

/// Block-diagonal assembly; blocks need not be square.
IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);

/// Identity minus the given square matrix.
IntMatrix one_minus(const IntMatrix& m);

/// Exact determinant by fraction-free (Bareiss) elimination.
Integer determinant(const IntMatrix& m);

/**
 * Finitely generated abelian group Z^free_rank + Z/d_1 + ... + Z/d_k with
 * d_1 | d_2 | ... | d_k and every d_i >= 2. Two isomorphic groups always have
 * identical field values, so operator== is isomorphism.
 */
struct AbelianGroup
{
    std::size_t free_rank = 0;
    std::vector<Integer> torsion;

    static AbelianGroup free(std::size_t rank);

    /// Group Z/a_1 + Z/a_2 + ... for arbitrary a_i >= 0 (0 gives a free summand),
    /// brought to canonical form.
    static AbelianGroup from_cyclic_orders(const std::vector<Integer>& orders);

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
    bool is_free() const { return torsion.empty(); }

    /// e.g. "Z^2 + Z/2 + Z/2", or "0".
    std::string to_string() const;

    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

/// U * M * V = D with U, V unimodular and D in Smith normal form.
struct SnfDecomposition
{
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;

    /// Diagonal of D, length min(rows, cols).
    std::vector<Integer> invariant_factors() const;
    std::size_t rank() const;
};

SnfDecomposition smith_normal_form(const IntMatrix& m);

/// Z^rows / im(M).
AbelianGroup cokernel(const IntMatrix& m);

/// Rank of ker(M) as a subgroup of Z^cols.
std::size_t kernel_rank(const IntMatrix& m);

/// Rank over Q by Gaussian elimination in exact rational arithmetic.
std::size_t rational_rank(const IntMatrix& m);

struct FieldKerCoker
{
    std::size_t ker_dim = 0;
    std::size_t coker_dim = 0;
    friend bool operator==(const FieldKerCoker&, const FieldKerCoker&) = default;
};

/// Kernel and cokernel dimensions of M over a characteristic-0 field.
FieldKerCoker field_ker_coker_dims(const IntMatrix& m);

} // namespace cpinv

#endif
