#include "cpinv/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cpinv {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols)
{
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_)
            throw std::invalid_argument("IntMatrix: ragged initializer");
        for (long v : row)
            entries_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::zero(std::size_t rows, std::size_t cols)
{
    return IntMatrix(rows, cols);
}

IntMatrix IntMatrix::diagonal(const std::vector<Integer>& entries)
{
    IntMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        m(i, i) = entries[i];
    return m;
}

IntMatrix IntMatrix::diagonal(std::initializer_list<long> entries)
{
    std::vector<Integer> v;
    for (long e : entries)
        v.emplace_back(e);
    return diagonal(v);
}

bool IntMatrix::is_diagonal() const
{
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i != j && (*this)(i, j) != 0)
                return false;
    return true;
}

IntMatrix IntMatrix::transposed() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t j = 0; j < cols_; ++j)
        std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t i = 0; i < rows_; ++i)
        std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor)
{
    if (factor == 0)
        return;
    for (std::size_t j = 0; j < cols_; ++j)
        (*this)(dst, j) += factor * (*this)(src, j);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor)
{
    if (factor == 0)
        return;
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, dst) += factor * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t r)
{
    for (std::size_t j = 0; j < cols_; ++j)
        (*this)(r, j) = -(*this)(r, j);
}

std::string IntMatrix::to_string() const
{
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        out << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j)
            out << (j ? ", " : "") << (*this)(i, j).get_str();
        out << "]";
    }
    out << "]";
    return out.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("IntMatrix product: inner dimensions differ");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("IntMatrix difference: shapes differ");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a(i, j) - b(i, j);
    return c;
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks)
{
    std::size_t rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    IntMatrix m(rows, cols);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                m(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return m;
}

IntMatrix one_minus(const IntMatrix& m)
{
    if (!m.is_square())
        throw std::invalid_argument("one_minus: matrix must be square");
    return IntMatrix::identity(m.rows()) - m;
}

Integer determinant(const IntMatrix& m)
{
    if (!m.is_square())
        throw std::invalid_argument("determinant: matrix must be square");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntMatrix a = m;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = a(k, k) * a(i, j) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

namespace {

// Position of the nonzero entry of least absolute value in A[t:, t:].
bool find_pivot(const IntMatrix& a, std::size_t t, std::size_t& pr, std::size_t& pc)
{
    bool found = false;
    Integer best;
    for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
            if (a(i, j) == 0)
                continue;
            Integer v = abs(a(i, j));
            if (!found || v < best) {
                best = v;
                pr = i;
                pc = j;
                found = true;
            }
        }
    return found;
}

} // namespace

SnfDecomposition smith_normal_form(const IntMatrix& m)
{
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    IntMatrix a = m;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);

    auto row_swap = [&](std::size_t x, std::size_t y) {
        a.swap_rows(x, y);
        u.swap_rows(x, y);
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        a.swap_cols(x, y);
        v.swap_cols(x, y);
    };
    auto row_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
        a.add_row_multiple(dst, src, f);
        u.add_row_multiple(dst, src, f);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
        a.add_col_multiple(dst, src, f);
        v.add_col_multiple(dst, src, f);
    };

    const std::size_t diag = std::min(rows, cols);
    for (std::size_t t = 0; t < diag; ++t) {
        std::size_t pr = t, pc = t;
        if (!find_pivot(a, t, pr, pc))
            break;
        row_swap(t, pr);
        col_swap(t, pc);

        for (;;) {
            // Clear column t below the pivot; a nonzero remainder becomes
            // the new (strictly smaller) pivot.
            bool dirty = false;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a(i, t) == 0)
                    continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
                row_add(i, t, -q);
                if (a(i, t) != 0) {
                    row_swap(t, i);
                    dirty = true;
                }
            }
            if (dirty)
                continue;
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a(t, j) == 0)
                    continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
                col_add(j, t, -q);
                if (a(t, j) != 0) {
                    col_swap(t, j);
                    dirty = true;
                }
            }
            if (dirty)
                continue;

            // Pivot row and column are clear. Enforce divisibility of the
            // remaining block by folding an offending row into row t.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
                        row_add(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (a(t, t) < 0) {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    return {std::move(u), std::move(a), std::move(v)};
}

std::vector<Integer> SnfDecomposition::invariant_factors() const
{
    std::vector<Integer> d;
    const std::size_t n = std::min(D.rows(), D.cols());
    d.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        d.push_back(D(i, i));
    return d;
}

std::size_t SnfDecomposition::rank() const
{
    std::size_t r = 0;
    for (const auto& d : invariant_factors())
        if (d != 0)
            ++r;
    return r;
}

// ---------------------------------------------------------------------------
// Abelian groups
// ---------------------------------------------------------------------------

AbelianGroup AbelianGroup::free(std::size_t rank)
{
    return AbelianGroup{rank, {}};
}

AbelianGroup AbelianGroup::from_cyclic_orders(const std::vector<Integer>& orders)
{
    AbelianGroup g;
    std::vector<Integer> finite;
    for (const auto& o : orders) {
        if (o < 0)
            throw std::invalid_argument("from_cyclic_orders: negative order");
        if (o == 0)
            ++g.free_rank;
        else if (o != 1)
            finite.push_back(o);
    }
    if (finite.empty())
        return g;
    // The invariant factors of diag(finite) give the canonical torsion part.
    for (const auto& d : smith_normal_form(IntMatrix::diagonal(finite)).invariant_factors())
        if (d != 1)
            g.torsion.push_back(d);
    return g;
}

std::string AbelianGroup::to_string() const
{
    if (is_trivial())
        return "0";
    std::ostringstream out;
    bool first = true;
    if (free_rank == 1) {
        out << "Z";
        first = false;
    } else if (free_rank > 1) {
        out << "Z^" << free_rank;
        first = false;
    }
    for (const auto& d : torsion) {
        out << (first ? "" : " + ") << "Z/" << d.get_str();
        first = false;
    }
    return out.str();
}

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b)
{
    std::vector<Integer> orders = a.torsion;
    orders.insert(orders.end(), b.torsion.begin(), b.torsion.end());
    AbelianGroup g = AbelianGroup::from_cyclic_orders(orders);
    g.free_rank = a.free_rank + b.free_rank;
    return g;
}

AbelianGroup cokernel(const IntMatrix& m)
{
    if (m.rows() == 0)
        return {};
    std::vector<Integer> orders = smith_normal_form(m).invariant_factors();
    // Rows beyond the diagonal are untouched free generators.
    orders.resize(m.rows(), Integer(0));
    return AbelianGroup::from_cyclic_orders(orders);
}

std::size_t kernel_rank(const IntMatrix& m)
{
    return m.cols() - smith_normal_form(m).rank();
}

std::size_t rational_rank(const IntMatrix& m)
{
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<Rational> a(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            a[i * cols + j] = Rational(m(i, j));

    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p * cols + c] == 0)
            ++p;
        if (p == rows)
            continue;
        for (std::size_t j = 0; j < cols; ++j)
            std::swap(a[p * cols + j], a[rank * cols + j]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (a[i * cols + c] == 0)
                continue;
            Rational f = a[i * cols + c] / a[rank * cols + c];
            for (std::size_t j = c; j < cols; ++j)
                a[i * cols + j] -= f * a[rank * cols + j];
        }
        ++rank;
    }
    return rank;
}

FieldKerCoker field_ker_coker_dims(const IntMatrix& m)
{
    const std::size_t r = rational_rank(m);
    return {m.cols() - r, m.rows() - r};
}

} // namespace cpinv
