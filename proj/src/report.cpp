#include "cpinv/report.hpp"

#include <iomanip>
#include <sstream>

namespace cpinv {

Json tagged(Json value, const char* source)
{
    return Json{{"value", std::move(value)}, {"source", source}};
}

namespace {

Json integer_json(const Integer& v)
{
    if (v.fits_slong_p())
        return v.get_si();
    return v.get_str();
}

Json dims_json(const std::map<int, std::size_t>& dims)
{
    Json j = Json::object();
    for (const auto& [n, d] : dims)
        j[std::to_string(n)] = d;
    return j;
}

Json induced_json(const GradedEndomorphism& e)
{
    Json j = Json::object();
    for (const auto& [deg, m] : e.maps) {
        Json diag = Json::array();
        for (std::size_t i = 0; i < m.rows(); ++i)
            diag.push_back(integer_json(m(i, i)));
        j[std::to_string(deg)] = diag;
    }
    return j;
}

Json descriptor_json(const DescriptorInvariants& inv)
{
    Json j;
    j["label"] = inv.descriptor.label;
    Json acts = Json::array();
    for (auto a : inv.descriptor.per_factor)
        acts.push_back(std::string(to_string(a)));
    j["actions"] = acts;
    j["conjugated"] = inv.descriptor.conjugated;
    j["induced_map_diagonal"] = tagged(induced_json(inv.induced));

    const auto& k = inv.k_theory;
    j["k_theory"] = {
        {"K0", group_json(k.k0)},
        {"K1", group_json(k.k1)},
        {"K0_coker_part", group_json(k.k0_coker_part)},
        {"K0_ker_part", group_json(k.k0_ker_part)},
        {"K1_coker_part", group_json(k.k1_coker_part)},
        {"K1_ker_part", group_json(k.k1_ker_part)},
        {"positive_cone_note", k.positive_cone_note},
    };
    j["hp"] = tagged({{"even", inv.hp.hp_even_dim}, {"odd", inv.hp.hp_odd_dim}});
    const auto& g = inv.grading;
    j["grading"] = {
        {"model_tag", g.model_tag},
        {"eq_dims", tagged(dims_json(g.eq_dims))},
        {"coeq_dims", tagged(dims_json(g.coeq_dims))},
        {"e_infty_dims", tagged(dims_json(g.e_infty_dims))},
        {"odd_support", tagged(Json(std::vector<int>(g.odd_support.begin(), g.odd_support.end())))},
    };
    return j;
}

Json degree_json(const dynamics::DegreeEstimate& d)
{
    return {
        {"degree", d.degree},       {"raw_mean", d.raw_mean}, {"ci_low", d.ci_low},
        {"ci_high", d.ci_high},     {"samples", d.samples},
    };
}

Json simulation_json(const SimulationSummary& s)
{
    Json j;
    j["map"] = tagged({{"t", s.map.t}, {"p6", s.map.apply_p6}, {"p8", s.map.apply_p8}}, "input");
    Json degrees = Json::array();
    for (const auto& [f, d] : s.degrees)
        degrees.push_back({{"factor", std::string(dynamics::to_string(f))}, {"estimate", tagged(degree_json(d))}});
    j["degrees"] = degrees;

    const auto& b = s.birkhoff;
    Json finals = Json::array();
    for (const auto& avg : b.averages) {
        const auto& a = avg.back();
        finals.push_back({{"re", a.real()}, {"im", a.imag()}, {"abs", std::abs(a)}});
    }
    j["birkhoff"] = {
        {"observable", std::string(dynamics::to_string(s.observable))},
        {"horizon", tagged(b.max_deviation.size(), "input")},
        {"start_points", tagged(b.starts.size(), "input")},
        {"final_averages", tagged(finals)},
        {"final_max_deviation", tagged(b.max_deviation.empty() ? 0.0 : b.max_deviation.back())},
    };
    if (s.coverage) {
        j["orbit_density"] = tagged({
            {"coverage", s.coverage->coverage},
            {"grid_points", s.coverage->grid_points},
            {"covered", s.coverage->covered},
            {"max_gap", s.coverage->max_gap},
        });
    } else {
        j["orbit_density"] = {{"skipped", s.coverage_note}};
    }
    return j;
}

void walk(const Json& j, const std::string& ptr, std::vector<std::string>& out)
{
    if (j.is_number()) {
        out.push_back(ptr.empty() ? "/" : ptr);
        return;
    }
    if (j.is_object()) {
        if (j.contains("value") && j.contains("source")) {
            const Json& src = j.at("source");
            if (src.is_string()) {
                const auto s = src.get<std::string>();
                if (s == "computed" || s == "input" || (s == "fixture" && j.contains("provenance")))
                    return;
            }
        }
        for (const auto& [k, v] : j.items())
            walk(v, ptr + "/" + k, out);
        return;
    }
    if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i)
            walk(j[i], ptr + "/" + std::to_string(i), out);
}

void group_row(std::ostringstream& out, const char* name, const AbelianGroup& g)
{
    out << "    " << std::left << std::setw(16) << name << g.to_string() << "\n";
}

std::string dims_line(const std::map<int, std::size_t>& dims)
{
    std::ostringstream out;
    bool first = true;
    for (const auto& [n, d] : dims) {
        if (d == 0)
            continue;
        out << (first ? "" : " ") << n << ":" << d;
        first = false;
    }
    return first ? "-" : out.str();
}

} // namespace

Json group_json(const AbelianGroup& g)
{
    Json torsion = Json::array();
    for (const auto& d : g.torsion)
        torsion.push_back(integer_json(d));
    return {
        {"text", g.to_string()},
        {"value", {{"free_rank", g.free_rank}, {"torsion", torsion}}},
        {"source", "computed"},
    };
}

std::vector<std::string> untagged_numbers(const Json& doc)
{
    std::vector<std::string> out;
    walk(doc, "", out);
    return out;
}

Json FixtureDiff::to_json() const
{
    Json rows_json = Json::array();
    for (const auto& r : rows) {
        rows_json.push_back({
            {"descriptor", r.descriptor},
            {"reference", r.reference},
            {"quantity", r.quantity},
            {"computed", tagged(r.computed)},
            {"expected", {{"value", r.expected}, {"source", "fixture"}, {"provenance", to_string(r.provenance)}}},
            {"match", r.match},
            {"note", r.note},
        });
    }
    return {{"mismatches", tagged(mismatches)}, {"rows", rows_json}};
}

std::string FixtureDiff::to_text() const
{
    std::ostringstream out;
    for (const auto& r : rows) {
        out << "  " << (r.match ? "match    " : "MISMATCH ") << r.descriptor << " (" << r.reference << ") "
            << r.quantity << ": computed " << r.computed << ", " << to_string(r.provenance) << " " << r.expected;
        if (!r.match && !r.note.empty())
            out << "\n             note: " << r.note;
        out << "\n";
    }
    return out.str();
}

FixtureDiff render_fixture_diff(const ReportDocument& report)
{
    FixtureDiff diff;
    for (const auto& inv : report.descriptors)
        for (auto& c : compare_with_fixtures(report.manifold, inv)) {
            if (!c.match)
                ++diff.mismatches;
            diff.rows.push_back(std::move(c));
        }
    return diff;
}

Json ReportDocument::to_json() const
{
    Json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = CPINV_VERSION;
    j["command"] = command;
    j["input"] = tagged(input, "input");
    j["assumptions"] = assumptions;

    Json results = Json::object();
    if (!descriptors.empty()) {
        results["manifold"] = tagged(manifold.factor_dims, "input");
        Json ds = Json::array();
        for (const auto& d : descriptors)
            ds.push_back(descriptor_json(d));
        results["descriptors"] = ds;
    }
    if (comparison) {
        results["comparison"] = {
            {"first", comparison->first.descriptor.label},
            {"second", comparison->second.descriptor.label},
            {"cstar_verdict", to_string(comparison->cstar_verdict)},
            {"smooth_verdict", to_string(comparison->smooth_verdict)},
        };
    }
    if (simulation)
        results["simulation"] = simulation_json(*simulation);
    j["results"] = results;

    j["fixture_diff"] = render_fixture_diff(*this).to_json();
    j["discrepancy_notes"] = discrepancy_notes;
    return j;
}

std::string ReportDocument::to_table() const
{
    std::ostringstream out;
    out << "cpinv " << CPINV_VERSION << " - " << command << "\n";
    if (!descriptors.empty()) {
        out << "manifold: ";
        if (manifold.factor_dims.empty())
            out << "point";
        for (std::size_t i = 0; i < manifold.factor_dims.size(); ++i)
            out << (i ? " x " : "") << "S^" << manifold.factor_dims[i];
        out << "\n";
    }
    for (const auto& d : descriptors) {
        out << "\n[" << d.descriptor.label << "] " << format_action_list(d.descriptor.per_factor)
            << (d.descriptor.conjugated ? " (conjugated)" : "") << "\n";
        if (command == "ktheory" || command == "compare") {
            out << "  K-theory of C(M) x| Z\n";
            group_row(out, "K0", d.k_theory.k0);
            group_row(out, "K1", d.k_theory.k1);
            group_row(out, "K0 coker part", d.k_theory.k0_coker_part);
            group_row(out, "K0 ker part", d.k_theory.k0_ker_part);
            group_row(out, "K1 coker part", d.k_theory.k1_coker_part);
            group_row(out, "K1 ker part", d.k_theory.k1_ker_part);
        }
        if (command == "hp" || command == "compare")
            out << "  HP of C^inf(M) x| Z: even " << d.hp.hp_even_dim << ", odd " << d.hp.hp_odd_dim << "\n";
        if (command == "grading" || command == "compare") {
            out << "  grading (" << d.grading.model_tag << ")\n";
            out << "    eq      " << dims_line(d.grading.eq_dims) << "\n";
            out << "    coeq    " << dims_line(d.grading.coeq_dims) << "\n";
            out << "    E_inf   " << dims_line(d.grading.e_infty_dims) << "\n";
            out << "    odd_support " << format_set(d.grading.odd_support) << "\n";
        }
    }
    if (comparison) {
        out << "\nC* verdict:     " << to_string(comparison->cstar_verdict) << "\n";
        out << "smooth verdict: " << to_string(comparison->smooth_verdict) << "\n";
    }
    if (simulation) {
        const auto& s = *simulation;
        out << "map: t = " << std::setprecision(17) << s.map.t << ", P6 " << (s.map.apply_p6 ? "on" : "off")
            << ", P8 " << (s.map.apply_p8 ? "on" : "off") << "\n";
        out << std::setprecision(6);
        for (const auto& [f, d] : s.degrees)
            out << "  degree on " << dynamics::to_string(f) << ": " << d.degree << " (mean " << d.raw_mean
                << ", 95% CI [" << d.ci_low << ", " << d.ci_high << "], N = " << d.samples << ")\n";
        const auto& b = s.birkhoff;
        out << "  Birkhoff average of " << dynamics::to_string(s.observable) << " at n = " << b.max_deviation.size()
            << ": |A_n| = " << std::abs(b.averages.front().back())
            << ", max deviation across " << b.starts.size() << " starts = " << b.max_deviation.back() << "\n";
        if (s.coverage)
            out << "  orbit density: coverage " << s.coverage->coverage << " (" << s.coverage->covered << "/"
                << s.coverage->grid_points << "), max gap " << s.coverage->max_gap << "\n";
        else
            out << "  orbit density: skipped (" << s.coverage_note << ")\n";
    }

    const FixtureDiff diff = render_fixture_diff(*this);
    if (!diff.rows.empty())
        out << "\nreference values:\n" << diff.to_text();
    if (!assumptions.empty()) {
        out << "\nassumptions:\n";
        for (const auto& a : assumptions)
            out << "  - " << a << "\n";
    }
    return out.str();
}

std::string birkhoff_csv(const dynamics::BirkhoffResult& r, std::size_t stride)
{
    std::ostringstream out;
    out << std::setprecision(17);
    out << "n,re,im,abs,max_deviation\n";
    if (r.averages.empty())
        return out.str();
    const auto& a = r.averages.front();
    stride = std::max<std::size_t>(stride, 1);
    for (std::size_t n = 1; n <= a.size(); ++n) {
        if (n % stride != 0 && n != a.size())
            continue;
        const auto& v = a[n - 1];
        out << n << "," << v.real() << "," << v.imag() << "," << std::abs(v) << "," << r.max_deviation[n - 1] << "\n";
    }
    return out.str();
}

} // namespace cpinv
