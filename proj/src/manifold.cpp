#include "cpinv/manifold.hpp"

#include <algorithm>
#include <sstream>

namespace cpinv {

namespace {

constexpr std::size_t kMaxFactors = 24;

} // namespace

void SphereProductManifold::validate() const
{
    if (factor_dims.size() > kMaxFactors)
        throw ValidationError("manifold", "at most " + std::to_string(kMaxFactors) + " factors supported");
    for (std::size_t i = 0; i < factor_dims.size(); ++i)
        if (factor_dims[i] < 1)
            throw ValidationError("manifold[" + std::to_string(i) + "]",
                                  "sphere dimension must be >= 1, got " + std::to_string(factor_dims[i]));
}

int SphereProductManifold::total_dim() const
{
    int d = 0;
    for (int n : factor_dims)
        d += n;
    return d;
}

std::vector<KunnethCell> SphereProductManifold::kunneth_basis() const
{
    validate();
    const std::uint32_t count = std::uint32_t{1} << factor_dims.size();
    std::vector<KunnethCell> cells;
    cells.reserve(count);
    for (std::uint32_t s = 0; s < count; ++s) {
        int deg = 0;
        for (std::size_t i = 0; i < factor_dims.size(); ++i)
            if (s & (std::uint32_t{1} << i))
                deg += factor_dims[i];
        cells.push_back({s, deg});
    }
    std::stable_sort(cells.begin(), cells.end(),
                     [](const KunnethCell& a, const KunnethCell& b) { return a.degree < b.degree; });
    return cells;
}

std::string_view to_string(FactorAction a)
{
    switch (a) {
    case FactorAction::identity:
        return "identity";
    case FactorAction::rotation:
        return "rotation";
    case FactorAction::antipodal:
        return "antipodal";
    }
    return "?";
}

FactorAction parse_factor_action(std::string_view s)
{
    if (s == "identity" || s == "id")
        return FactorAction::identity;
    if (s == "rotation" || s == "rot")
        return FactorAction::rotation;
    if (s == "antipodal" || s == "anti")
        return FactorAction::antipodal;
    throw ValidationError("action", "unknown factor action '" + std::string(s) +
                                        "' (expected identity, rotation or antipodal)");
}

std::vector<FactorAction> parse_action_list(std::string_view s)
{
    std::vector<FactorAction> out;
    if (s.empty())
        return out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = s.find(',', start);
        std::string_view tok = s.substr(start, comma == std::string_view::npos ? s.npos : comma - start);
        while (!tok.empty() && tok.front() == ' ')
            tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ')
            tok.remove_suffix(1);
        out.push_back(parse_factor_action(tok));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string format_action_list(const std::vector<FactorAction>& actions)
{
    std::string s;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i)
            s += ',';
        s += to_string(actions[i]);
    }
    return s;
}

void DiffeoDescriptor::validate(const SphereProductManifold& m) const
{
    m.validate();
    const std::string name = label.empty() ? std::string("descriptor") : label;
    if (per_factor.size() != m.num_factors())
        throw ValidationError(name, "has " + std::to_string(per_factor.size()) + " factor actions but the manifold has " +
                                        std::to_string(m.num_factors()) + " factors");
    for (std::size_t i = 0; i < per_factor.size(); ++i)
        if (per_factor[i] == FactorAction::rotation && m.factor_dims[i] % 2 == 0)
            throw ValidationError(name + "[" + std::to_string(i) + "]",
                                  "rotation requires an odd-dimensional sphere, factor is S^" +
                                      std::to_string(m.factor_dims[i]));
}

DiffeoDescriptor DiffeoDescriptor::identity(const SphereProductManifold& m, std::string label)
{
    return {std::vector<FactorAction>(m.num_factors(), FactorAction::identity), std::move(label), false};
}

int factor_degree(FactorAction a, int sphere_dim)
{
    switch (a) {
    case FactorAction::identity:
    case FactorAction::rotation:
        return 1;
    case FactorAction::antipodal:
        return sphere_dim % 2 == 0 ? -1 : 1;
    }
    return 1;
}

namespace {

FactorAction compose_factor(FactorAction outer, FactorAction inner)
{
    if (outer == FactorAction::identity)
        return inner;
    if (inner == FactorAction::identity)
        return outer;
    if (outer == FactorAction::antipodal && inner == FactorAction::antipodal)
        return FactorAction::identity;
    // Remaining cases involve a rotation, so the sphere is odd-dimensional;
    // there the antipodal map is the half-turn of the circle action.
    return FactorAction::rotation;
}

} // namespace

DiffeoDescriptor compose(const DiffeoDescriptor& outer, const DiffeoDescriptor& inner,
                         const SphereProductManifold& m)
{
    outer.validate(m);
    inner.validate(m);
    DiffeoDescriptor out;
    out.label = outer.label + "*" + inner.label;
    out.conjugated = outer.conjugated || inner.conjugated;
    for (std::size_t i = 0; i < m.num_factors(); ++i)
        out.per_factor.push_back(compose_factor(outer.per_factor[i], inner.per_factor[i]));
    return out;
}

const AbelianGroup& GradedAbelianGroup::at(int degree) const
{
    static const AbelianGroup trivial{};
    auto it = groups.find(degree);
    return it == groups.end() ? trivial : it->second;
}

std::size_t GradedAbelianGroup::total_rank() const
{
    std::size_t r = 0;
    for (const auto& [d, g] : groups)
        r += g.free_rank;
    return r;
}

const IntMatrix& GradedEndomorphism::at(int degree) const
{
    static const IntMatrix empty{};
    auto it = maps.find(degree);
    return it == maps.end() ? empty : it->second;
}

bool GradedEndomorphism::matches(const GradedAbelianGroup& g) const
{
    for (const auto& [d, m] : maps)
        if (!m.is_square() || m.rows() != g.rank(d))
            return false;
    for (const auto& [d, grp] : g.groups)
        if (grp.free_rank != 0 && at(d).rows() != grp.free_rank)
            return false;
    return true;
}

GradedEndomorphism operator*(const GradedEndomorphism& a, const GradedEndomorphism& b)
{
    GradedEndomorphism c;
    for (const auto& [d, m] : a.maps)
        c.maps[d] = m * b.at(d);
    return c;
}

GradedAbelianGroup kunneth_homology(const SphereProductManifold& m)
{
    GradedAbelianGroup h;
    for (const auto& cell : m.kunneth_basis())
        h.groups[cell.degree].free_rank += 1;
    return h;
}

GradedEndomorphism induced_graded_map(const SphereProductManifold& m, const DiffeoDescriptor& phi)
{
    phi.validate(m);
    std::map<int, std::vector<Integer>> diag;
    for (const auto& cell : m.kunneth_basis()) {
        long sign = 1;
        for (std::size_t i = 0; i < m.num_factors(); ++i)
            if (cell.subset & (std::uint32_t{1} << i))
                sign *= factor_degree(phi.per_factor[i], m.factor_dims[i]);
        diag[cell.degree].emplace_back(sign);
    }
    GradedEndomorphism e;
    for (auto& [d, entries] : diag)
        e.maps[d] = IntMatrix::diagonal(entries);
    return e;
}

SpaceKTheory k_theory_of_space(const SphereProductManifold& m)
{
    SpaceKTheory k;
    for (const auto& cell : m.kunneth_basis())
        (cell.degree % 2 == 0 ? k.even_cells : k.odd_cells).push_back(cell);
    k.k0 = AbelianGroup::free(k.even_cells.size());
    k.k1 = AbelianGroup::free(k.odd_cells.size());
    return k;
}

IntMatrix collapse_parity(const GradedEndomorphism& e, int parity)
{
    std::vector<IntMatrix> blocks;
    for (const auto& [d, m] : e.maps)
        if (d % 2 == parity)
            blocks.push_back(m);
    return block_diagonal(blocks);
}

} // namespace cpinv
