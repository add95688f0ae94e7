#include "cpinv/invariants.hpp"

#include <future>

#include "cpinv/fixtures.hpp"

namespace cpinv {

namespace {

void require_free(const AbelianGroup& g, const char* name)
{
    if (!g.is_free())
        throw std::invalid_argument(std::string("pv_k_theory: ") + name + " = " + g.to_string() +
                                    " has torsion; the extension problem is unsupported");
}

void require_action_shape(const IntMatrix& a, const AbelianGroup& g, const char* name)
{
    if (!a.is_square() || a.rows() != g.free_rank)
        throw std::invalid_argument(std::string("pv_k_theory: action on ") + name + " is " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    ", expected square of size " + std::to_string(g.free_rank));
}

// Direct sum over the degrees of one parity of the graded pieces, as a
// single square matrix acting on the sum of the groups.
IntMatrix parity_block(const GradedAbelianGroup& h, const GradedEndomorphism& action, int parity)
{
    std::vector<IntMatrix> blocks;
    for (const auto& [d, g] : h.groups)
        if (((d % 2) + 2) % 2 == parity && g.free_rank > 0)
            blocks.push_back(action.at(d));
    return block_diagonal(blocks);
}

void require_matching(const GradedAbelianGroup& h, const GradedEndomorphism& action, const char* op)
{
    if (!action.matches(h))
        throw std::invalid_argument(std::string(op) + ": action shape does not match the graded group");
}

} // namespace

CrossedProductKTheory pv_k_theory(const AbelianGroup& k0, const AbelianGroup& k1,
                                  const IntMatrix& action_k0, const IntMatrix& action_k1)
{
    require_free(k0, "K0");
    require_free(k1, "K1");
    require_action_shape(action_k0, k0, "K0");
    require_action_shape(action_k1, k1, "K1");

    const IntMatrix f0 = one_minus(action_k0);
    const IntMatrix f1 = one_minus(action_k1);

    CrossedProductKTheory k;
    k.k0_coker_part = cokernel(f0);
    k.k0_ker_part = AbelianGroup::free(kernel_rank(f1));
    k.k1_coker_part = cokernel(f1);
    k.k1_ker_part = AbelianGroup::free(kernel_rank(f0));
    k.k0 = direct_sum(k.k0_coker_part, k.k0_ker_part);
    k.k1 = direct_sum(k.k1_coker_part, k.k1_ker_part);

    if (k.k0.free_rank != k.k0_coker_part.free_rank + k.k0_ker_part.free_rank ||
        k.k1.free_rank != k.k1_coker_part.free_rank + k.k1_ker_part.free_rank)
        throw InvariantViolation("pv_k_theory: rank of the split extension does not add up");
    return k;
}

CrossedProductKTheory crossed_product_k_theory(const SphereProductManifold& m, const DiffeoDescriptor& phi)
{
    const SpaceKTheory space = k_theory_of_space(m);
    const GradedEndomorphism induced = induced_graded_map(m, phi);
    return pv_k_theory(space.k0, space.k1, collapse_parity(induced, 0), collapse_parity(induced, 1));
}

long SixTermDims::alternating_sum() const
{
    long s = 0;
    for (std::size_t i = 0; i < 6; ++i)
        s += (i % 2 == 0 ? 1 : -1) * static_cast<long>(node_dims[i]);
    return s;
}

bool SixTermDims::is_exact() const
{
    for (std::size_t i = 0; i < 6; ++i) {
        const std::size_t in = map_ranks[(i + 5) % 6];
        if (node_dims[i] != in + map_ranks[i])
            return false;
    }
    return true;
}

SixTermDims nest_six_term(const GradedAbelianGroup& h, const GradedEndomorphism& action)
{
    require_matching(h, action, "nest_six_term");
    const IntMatrix even = parity_block(h, action, 0);
    const IntMatrix odd = parity_block(h, action, 1);
    const FieldKerCoker fe = field_ker_coker_dims(one_minus(even));
    const FieldKerCoker fo = field_ker_coker_dims(one_minus(odd));
    const std::size_t re = rational_rank(one_minus(even));
    const std::size_t ro = rational_rank(one_minus(odd));

    SixTermDims s;
    s.node_dims = {
        even.rows(),
        even.rows(),
        fe.coker_dim + fo.ker_dim, // HP_od(crossed)
        odd.rows(),
        odd.rows(),
        fo.coker_dim + fe.ker_dim, // HP_ev(crossed)
    };
    s.map_ranks = {
        re,           // 1 - a on HP_ev(M)
        fe.coker_dim, // coker(1 - a) injects
        fo.ker_dim,   // onto ker(1 - a) on HP_od(M)
        ro,           // 1 - a on HP_od(M)
        fo.coker_dim,
        fe.ker_dim,
    };
    return s;
}

PeriodicCyclicCohomology nest_hp(const GradedAbelianGroup& h, const GradedEndomorphism& action)
{
    const SixTermDims s = nest_six_term(h, action);
    if (!s.is_exact())
        throw InvariantViolation("nest_hp: assembled six-term sequence is not exact");
    if (s.alternating_sum() != 0)
        throw InvariantViolation("nest_hp: six-term alternating dimension sum is " +
                                 std::to_string(s.alternating_sum()));
    return {s.node_dims[5], s.node_dims[2]};
}

std::size_t GradingStructure::total_e_infty() const
{
    std::size_t t = 0;
    for (const auto& [n, d] : e_infty_dims)
        t += d;
    return t;
}

std::set<int> GradingStructure::support() const
{
    std::set<int> s;
    for (const auto& [n, d] : e_infty_dims)
        if (d > 0)
            s.insert(n);
    return s;
}

GradingStructure grading_structure(const GradedAbelianGroup& h, const GradedEndomorphism& action)
{
    require_matching(h, action, "grading_structure");
    GradingStructure g;
    int top = 0;
    for (const auto& [n, grp] : h.groups) {
        if (grp.free_rank == 0)
            continue;
        const FieldKerCoker f = field_ker_coker_dims(one_minus(action.at(n)));
        g.eq_dims[n] = f.ker_dim;
        g.coeq_dims[n] = f.coker_dim;
        top = std::max(top, n);
    }
    for (int n = 0; n <= top + 1; ++n) {
        std::size_t e = 0;
        if (auto it = g.eq_dims.find(n); it != g.eq_dims.end())
            e += it->second;
        if (auto it = g.coeq_dims.find(n - 1); it != g.coeq_dims.end())
            e += it->second;
        if (e > 0) {
            g.e_infty_dims[n] = e;
            if (n % 2 != 0)
                g.odd_support.insert(n);
        }
    }
    return g;
}

std::string to_string(Verdict v)
{
    return v == Verdict::distinguished ? "distinguished" : "indistinguishable-by-these-invariants";
}

DescriptorInvariants compute_invariants(const SphereProductManifold& m, const DiffeoDescriptor& phi)
{
    DescriptorInvariants out;
    out.descriptor = phi;
    out.induced = induced_graded_map(m, phi);
    const GradedAbelianGroup h = kunneth_homology(m);
    out.k_theory = crossed_product_k_theory(m, phi);
    out.hp = nest_hp(h, out.induced);
    out.grading = grading_structure(h, out.induced);
    if (out.grading.total_e_infty() != out.hp.hp_even_dim + out.hp.hp_odd_dim)
        throw InvariantViolation("grading total " + std::to_string(out.grading.total_e_infty()) +
                                 " differs from HP total dimension");
    return out;
}

InvariantReport compare_invariants(const DiffeoDescriptor& d1, const DiffeoDescriptor& d2,
                                   const SphereProductManifold& m)
{
    d1.validate(m);
    d2.validate(m);

    auto second = std::async(std::launch::async, [&] { return compute_invariants(m, d2); });
    InvariantReport r;
    r.manifold = m;
    r.first = compute_invariants(m, d1);
    r.second = second.get();

    const bool same_k = r.first.k_theory.k0 == r.second.k_theory.k0 && r.first.k_theory.k1 == r.second.k_theory.k1;
    r.cstar_verdict = same_k ? Verdict::indistinguishable : Verdict::distinguished;
    r.smooth_verdict = r.first.grading.odd_support == r.second.grading.odd_support ? Verdict::indistinguishable
                                                                                   : Verdict::distinguished;

    for (const auto* inv : {&r.first, &r.second})
        for (const auto& c : compare_with_fixtures(m, *inv))
            if (!c.match)
                r.discrepancy_notes.push_back(c.describe());
    return r;
}

} // namespace cpinv
