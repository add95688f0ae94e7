#include "cpinv/cli.hpp"

#include <algorithm>
#include <fstream>

#include <CLI11.hpp>

namespace cpinv {

namespace {

struct Flags
{
    std::string config_path;
    std::string json_path;
    std::string csv_path;
    std::optional<std::string> manifold;
    std::optional<std::string> a;
    std::optional<std::string> b;
    std::string a_label = "a";
    std::string b_label = "b";
    bool a_conjugated = false;
    bool b_conjugated = false;

    std::optional<double> t;
    std::optional<bool> p6;
    std::optional<bool> p8;
    std::optional<std::size_t> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<double> epsilon;
    std::optional<std::size_t> density_horizon;
    std::optional<std::string> observable;
    std::optional<std::size_t> starts;
    std::optional<unsigned> workers;
    std::optional<std::size_t> csv_stride;
};

void upsert_diffeo(JobConfig& cfg, const std::string& name, const std::string& actions, bool conjugated,
                   const std::string& flag)
{
    DiffeoEntry e;
    e.name = name;
    try {
        e.actions = parse_action_list(actions);
    } catch (const ValidationError& err) {
        throw ConfigError(flag, err.what());
    }
    e.conjugated = conjugated;
    auto it = std::find_if(cfg.diffeos.begin(), cfg.diffeos.end(), [&](const DiffeoEntry& d) { return d.name == name; });
    if (it != cfg.diffeos.end())
        *it = e;
    else
        cfg.diffeos.push_back(e);
}

// Resolves the single descriptor for ktheory/hp/grading: --a, then the
// command block, then the identity.
std::string resolve_single(JobConfig& cfg, std::optional<SingleDiffeoBlock>& block, const Flags& f)
{
    if (f.a) {
        upsert_diffeo(cfg, f.a_label, *f.a, f.a_conjugated, "--a");
        block = SingleDiffeoBlock{f.a_label};
    } else if (!block) {
        SphereProductManifold m{cfg.manifold};
        m.validate();
        upsert_diffeo(cfg, "identity", format_action_list(DiffeoDescriptor::identity(m).per_factor), false, "--a");
        block = SingleDiffeoBlock{"identity"};
    }
    return block->diffeo;
}

std::vector<std::string> invariant_assumptions()
{
    return {
        kChernCharacterNote,
        std::string("grading computed in the ") + kGradingModelTag +
            ": the action on H_*(M) with zero differential stands in for the action on de Rham currents",
        kPositiveConeNote,
        "conjugated descriptors g o phi o g^-1 are taken to induce the same maps as phi",
        "sphere-product homology is torsion-free, so H_n and H^n share the Kunneth basis and the induced signs",
    };
}

void fill_discrepancies(ReportDocument& doc)
{
    for (const auto& row : render_fixture_diff(doc).rows)
        if (!row.match)
            doc.discrepancy_notes.push_back(row.describe());
}

ReportDocument run_invariants(const std::string& command, JobConfig& cfg, const Flags& f)
{
    ReportDocument doc;
    doc.command = command;
    std::vector<std::string> names;
    if (command == "compare") {
        if (f.a)
            upsert_diffeo(cfg, f.a_label, *f.a, f.a_conjugated, "--a");
        if (f.b)
            upsert_diffeo(cfg, f.b_label, *f.b, f.b_conjugated, "--b");
        if (f.a || f.b) {
            if (!cfg.compare && !(f.a && f.b))
                throw ConfigError(f.a ? "--b" : "--a", "compare needs two descriptors");
            CompareBlock cb = cfg.compare.value_or(CompareBlock{});
            if (f.a)
                cb.a = f.a_label;
            if (f.b)
                cb.b = f.b_label;
            cfg.compare = cb;
        }
        if (!cfg.compare)
            throw ConfigError("compare", "needs --a and --b, or a 'compare' block in the config");
        names = {cfg.compare->a, cfg.compare->b};
    } else if (command == "ktheory") {
        names = {resolve_single(cfg, cfg.pv, f)};
    } else if (command == "hp") {
        names = {resolve_single(cfg, cfg.hp, f)};
    } else {
        names = {resolve_single(cfg, cfg.grading, f)};
    }
    cfg.validate();
    doc.input = to_json(cfg);
    doc.manifold = SphereProductManifold{cfg.manifold};

    if (command == "compare") {
        const std::string field_a = f.a ? "--a" : "compare.a";
        const std::string field_b = f.b ? "--b" : "compare.b";
        InvariantReport r = compare_invariants(cfg.descriptor(names[0], field_a), cfg.descriptor(names[1], field_b),
                                               doc.manifold);
        doc.descriptors = {r.first, r.second};
        doc.discrepancy_notes = r.discrepancy_notes;
        doc.comparison = std::move(r);
    } else {
        doc.descriptors = {compute_invariants(doc.manifold, cfg.descriptor(names[0], "--a"))};
        fill_discrepancies(doc);
    }
    doc.assumptions = invariant_assumptions();
    return doc;
}

ReportDocument run_simulate(JobConfig& cfg, const Flags& f)
{
    SimulateBlock s = cfg.simulate.value_or(SimulateBlock{});
    if (f.t)
        s.t = *f.t;
    if (f.p6)
        s.p6 = *f.p6;
    if (f.p8)
        s.p8 = *f.p8;
    if (f.horizon)
        s.horizon = *f.horizon;
    if (f.seed)
        s.seed = *f.seed;
    if (f.samples)
        s.samples = *f.samples;
    if (f.epsilon)
        s.epsilon = *f.epsilon;
    if (f.density_horizon)
        s.density_horizon = *f.density_horizon;
    if (f.observable)
        s.observable = *f.observable;
    if (f.starts)
        s.random_starts = *f.starts;
    if (f.workers)
        s.workers = *f.workers;
    if (f.csv_stride)
        s.csv_stride = *f.csv_stride;
    cfg.simulate = s;
    cfg.validate();

    ReportDocument doc;
    doc.command = "simulate";
    doc.input = to_json(cfg);

    SimulationSummary sum;
    sum.map = {s.t, s.p6, s.p8};
    sum.observable = dynamics::parse_observable(s.observable);
    std::uint64_t stream_offset = 0;
    for (auto factor : {dynamics::SphereFactor::s3, dynamics::SphereFactor::s6, dynamics::SphereFactor::s8}) {
        sum.degrees.emplace_back(factor,
                                 dynamics::estimate_degree(factor, sum.map, s.samples, s.seed + stream_offset, s.workers));
        stream_offset += 0x10000;
    }

    dynamics::BirkhoffConfig bc;
    bc.horizon = s.horizon;
    bc.observable = sum.observable;
    bc.random_starts = s.random_starts;
    bc.seed = s.seed;
    sum.birkhoff = dynamics::birkhoff_average(sum.map, bc, s.workers);

    if (dynamics::is_effectively_rational(s.t, s.density_horizon)) {
        sum.coverage_note = "t is rational at horizon " + std::to_string(s.density_horizon);
    } else {
        sum.coverage = dynamics::orbit_density_check(sum.map, sum.birkhoff.starts.front(), s.density_horizon, s.epsilon);
    }

    if (!f.csv_path.empty()) {
        std::ofstream out(f.csv_path);
        if (!out)
            throw ConfigError("--csv", "cannot write '" + f.csv_path + "'");
        out << birkhoff_csv(sum.birkhoff, s.csv_stride);
    }
    doc.simulation = std::move(sum);
    doc.assumptions = {
        "finite-horizon evidence for the pre-limit maps R_t o P; the minimal uniquely ergodic limits are not realized",
        "S^3 is the unit sphere |a2|^2 + |a3|^2 = 1 in C^2",
        "degree = mean oriented Jacobian over uniform samples; uniform sampling stands in for Lebesgue measure",
    };
    return doc;
}

} // namespace

CommandOutcome run_command(const std::vector<std::string>& args)
{
    CommandOutcome outcome;
    Flags f;
    CLI::App app{"Crossed-product invariants of sphere-product diffeomorphisms", "cpinv"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--config", f.config_path, "JSON job file; flags override its values")->check(CLI::ExistingFile);
    app.add_option("--json", f.json_path, "Write the JSON report to this path");
    app.add_option("--manifold", f.manifold, "Sphere dimensions, e.g. 3,6,8 ('point' for the empty product)");
    app.add_option("--a", f.a, "Factor actions of the first descriptor, e.g. rotation,antipodal,identity");
    app.add_option("--b", f.b, "Factor actions of the second descriptor (compare)");
    app.add_option("--a-label", f.a_label, "Display name for --a");
    app.add_option("--b-label", f.b_label, "Display name for --b");
    app.add_flag("--a-conjugated", f.a_conjugated, "Mark --a as conjugated by a diffeomorphism");
    app.add_flag("--b-conjugated", f.b_conjugated, "Mark --b as conjugated by a diffeomorphism");

    app.add_subcommand("ktheory", "K-theory of C(M) x| Z from the Pimsner-Voiculescu sequence");
    app.add_subcommand("hp", "Periodic cyclic cohomology of C^inf(M) x| Z from Nest's sequence");
    app.add_subcommand("grading", "E_inf grading of HP (eq/coeq model)");
    app.add_subcommand("compare", "Compare two descriptors on the same manifold");
    CLI::App* sim = app.add_subcommand("simulate", "Degree, Birkhoff and orbit-density checks for R_t o P");
    sim->add_option("--t", f.t, "Circle parameter in [0, 1)");
    sim->add_option("--p6", f.p6, "Apply the antipodal map on S^6 (true/false)");
    sim->add_option("--p8", f.p8, "Apply the antipodal map on S^8 (true/false)");
    sim->add_option("--horizon", f.horizon, "Birkhoff horizon");
    sim->add_option("--seed", f.seed, "RNG seed");
    sim->add_option("--samples", f.samples, "Monte Carlo samples per degree estimate");
    sim->add_option("--epsilon", f.epsilon, "Grid spacing and radius for the orbit-density check");
    sim->add_option("--density-horizon", f.density_horizon, "Orbit length for the orbit-density check");
    sim->add_option("--observable", f.observable, "constant, character_s3, s6_first, s8_first or s3_re_a2");
    sim->add_option("--starts", f.starts, "Number of uniform random start points");
    sim->add_option("--workers", f.workers, "Worker threads (0 = hardware concurrency)");
    sim->add_option("--csv", f.csv_path, "Write the Birkhoff time series to this CSV file");
    sim->add_option("--csv-stride", f.csv_stride, "Write every k-th step to the CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        outcome.text = app.help();
        return outcome;
    } catch (const CLI::CallForAllHelp&) {
        outcome.text = app.help("", CLI::AppFormatMode::All);
        return outcome;
    } catch (const CLI::ParseError& e) {
        outcome.exit_code = kExitValidation;
        outcome.error = e.what();
        return outcome;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        JobConfig cfg = f.config_path.empty() ? JobConfig{} : load_config(f.config_path);
        if (f.manifold)
            cfg.manifold = parse_manifold_list(*f.manifold);

        ReportDocument doc = command == "simulate" ? run_simulate(cfg, f) : run_invariants(command, cfg, f);
        Json json = doc.to_json();
        if (const auto bad = untagged_numbers(json); !bad.empty())
            throw InvariantViolation("report has untagged numeric values, first at " + bad.front());
        if (!f.json_path.empty()) {
            std::ofstream out(f.json_path);
            if (!out)
                throw ConfigError("--json", "cannot write '" + f.json_path + "'");
            out << json.dump(2) << "\n";
        }
        outcome.text = doc.to_table();
        outcome.json = std::move(json);
        outcome.report = std::move(doc);
    } catch (const ValidationError& e) {
        outcome.exit_code = kExitValidation;
        outcome.error = e.what();
    } catch (const InvariantViolation& e) {
        outcome.exit_code = kExitInternal;
        outcome.error = std::string("internal invariant violated: ") + e.what();
    } catch (const dynamics::DegreeEstimationError& e) {
        outcome.exit_code = kExitInternal;
        outcome.error = std::string("internal invariant violated: ") + e.what();
    } catch (const std::invalid_argument& e) {
        outcome.exit_code = kExitValidation;
        outcome.error = e.what();
    } catch (const std::exception& e) {
        outcome.exit_code = kExitInternal;
        outcome.error = e.what();
    }
    return outcome;
}

} // namespace cpinv
