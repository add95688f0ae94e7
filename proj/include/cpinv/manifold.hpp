/**
 * Products of spheres: Kunneth basis, graded (co)homology, and the graded
 * maps induced by diffeomorphisms described one factor at a time.
 */
#ifndef CPINV_MANIFOLD_HPP
#define CPINV_MANIFOLD_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cpinv/linalg.hpp"

namespace cpinv {

/// Raised for malformed manifolds or descriptors; carries the offending field.
class ValidationError : public std::invalid_argument
{
    public:
        ValidationError(std::string field, const std::string& what)
            : std::invalid_argument(field + ": " + what), field_(std::move(field))
        {
        }
        const std::string& field() const { return field_; }

    private:
        std::string field_;
};

/// Kunneth basis element: the product of the fundamental classes of the
/// factors whose bits are set in `subset`.
struct KunnethCell
{
    std::uint32_t subset = 0;
    int degree = 0;
};

struct SphereProductManifold
{
    std::vector<int> factor_dims;

    void validate() const;
    int total_dim() const;
    std::size_t num_factors() const { return factor_dims.size(); }

    /// All 2^k cells ordered by (degree, subset).
    std::vector<KunnethCell> kunneth_basis() const;

    friend bool operator==(const SphereProductManifold&, const SphereProductManifold&) = default;
};

enum class FactorAction
{
    identity,
    rotation,
    antipodal,
};

std::string_view to_string(FactorAction a);
FactorAction parse_factor_action(std::string_view s);

struct DiffeoDescriptor
{
    std::vector<FactorAction> per_factor;
    std::string label;
    // g o phi o g^-1 for some unspecified g; acts trivially on induced maps.
    bool conjugated = false;

    void validate(const SphereProductManifold& m) const;

    static DiffeoDescriptor identity(const SphereProductManifold& m, std::string label = "identity");

    friend bool operator==(const DiffeoDescriptor&, const DiffeoDescriptor&) = default;
};

/// Parses "rotation,antipodal,identity". Empty string is the empty list.
std::vector<FactorAction> parse_action_list(std::string_view s);
std::string format_action_list(const std::vector<FactorAction>& actions);

/// Degree of the factor map on S^n.
int factor_degree(FactorAction a, int sphere_dim);

/// Factor-wise composition (first `inner`, then `outer`).
DiffeoDescriptor compose(const DiffeoDescriptor& outer, const DiffeoDescriptor& inner,
                         const SphereProductManifold& m);

/// Degree -> group; degrees that are absent are trivial.
struct GradedAbelianGroup
{
    std::map<int, AbelianGroup> groups;

    const AbelianGroup& at(int degree) const;
    std::size_t rank(int degree) const { return at(degree).free_rank; }
    std::size_t total_rank() const;

    friend bool operator==(const GradedAbelianGroup&, const GradedAbelianGroup&) = default;
};

/// Degree -> square integer matrix in the Kunneth basis of that degree.
struct GradedEndomorphism
{
    std::map<int, IntMatrix> maps;

    /// Matrix in `degree`; the 0x0 matrix if the degree is absent.
    const IntMatrix& at(int degree) const;
    bool matches(const GradedAbelianGroup& g) const;

    friend bool operator==(const GradedEndomorphism&, const GradedEndomorphism&) = default;
};

GradedEndomorphism operator*(const GradedEndomorphism& a, const GradedEndomorphism& b);

GradedAbelianGroup kunneth_homology(const SphereProductManifold& m);

/**
 * Induced map on H_*(M). The cell for subset S is multiplied by the product of
 * the factor degrees over S, so every matrix is diagonal with entries +-1.
 */
GradedEndomorphism induced_graded_map(const SphereProductManifold& m, const DiffeoDescriptor& phi);

/**
 * K^0 and K^1 of C(M), collapsed from the even and odd cohomology. The
 * per-parity cell lists fix the basis used by `collapse_parity`.
 */
struct SpaceKTheory
{
    AbelianGroup k0;
    AbelianGroup k1;
    std::vector<KunnethCell> even_cells;
    std::vector<KunnethCell> odd_cells;
};

SpaceKTheory k_theory_of_space(const SphereProductManifold& m);

/// Direct sum of the graded pieces of one parity (0 even, 1 odd), in
/// ascending degree order.
IntMatrix collapse_parity(const GradedEndomorphism& e, int parity);

} // namespace cpinv

#endif
