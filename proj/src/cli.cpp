#include "cstab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cstab/json_io.hpp"

namespace cstab {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ParamMap parse_kv_list(const std::vector<std::string>& kvs) {
    ParamMap out;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--param", "expected key=value, got '" + kv + "'");
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

// "family:key=val,key=val" -> (family, params)
std::pair<std::string, ParamMap> parse_dist_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string family = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    ParamMap params;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("malformed parameter '" + item + "' in spec");
            params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
    }
    return {family, params};
}

// "lo:hi:step" -> grid values; "lo:hi" uses step 1.
std::vector<double> parse_range(const std::string& s) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("bad range '" + s + "'");
    double lo = parts[0], hi = parts[1], step = parts.size() == 3 ? parts[2] : 1.0;
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output path '" + path + "'");
    return f;
}

void emit_json(const ordered_json& j, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        write_json(j, fallback);
        fallback << "\n";
    } else {
        auto f = open_output(path);
        write_json(j, f);
        f << "\n";
    }
}

void write_residual_csv(const std::vector<CaseReport>& reports, std::ostream& os) {
    os << "case,report,n,point,residual\n";
    for (const auto& cr : reports) {
        for (size_t ri = 0; ri < cr.reports.size(); ++ri) {
            const auto& rep = cr.reports[ri];
            for (const auto& nr : rep.per_n)
                for (size_t i = 0; i < nr.points.size(); ++i)
                    os << cr.spec.id << ',' << ri << ',' << nr.n << ',' << fmt17(nr.points[i])
                       << ',' << fmt17(nr.residuals[i]) << "\n";
        }
    }
}

// Transform family behind a CLI p.g.f. spec name.
std::string pgf_family_for(const std::string& name) {
    if (name == "eq13" || name == "tempered_discrete") return "tempered_discrete_pgf";
    if (name == "eq14" || name == "tempered_discrete_normalizer") return "tempered_discrete_q_pgf";
    if (name == "sibuya") return "sibuya_pgf";
    if (name == "sibuya_normalizer") return "sibuya_q_pgf";
    if (name == "geometric") return "geometric_pgf";
    if (name == "geometric_normalizer") return "geometric_q_pgf";
    if (name == "srw_passage") return "srw_passage_pgf";
    if (name == "chebyshev_normalizer") return "chebyshev_q_pgf";
    throw std::invalid_argument("unknown p.g.f. spec '" + name + "'");
}

int verify_command(const std::string& target, const ParamMap& overrides,
                   const std::string& json_path, const std::string& csv_path, std::ostream& out,
                   std::ostream& err) {
    std::vector<CaseReport> reports;
    if (is_case_id(target)) {
        reports.push_back(run_case(target, overrides));
    } else if (std::ifstream f{target}; f.good()) {
        nlohmann::json spec;
        try {
            f >> spec;
        } catch (const std::exception& e) {
            err << "error: malformed spec file '" << target << "': " << e.what() << "\n";
            return 2;
        }
        StabilityClaim claim;
        std::string expected = spec.value("expected", "PASS");
        try {
            auto dist = spec.at("distribution");
            ParamMap dp;
            for (auto& [k, v] : dist.at("params").items()) dp[k] = v.get<double>();
            claim.distribution = make_distribution(dist.at("family").get<std::string>(), dp);
            std::string system = spec.value("system", "additive");
            claim.system = system == "product" ? SystemKind::Product
                          : system == "min"    ? SystemKind::Min
                          : system == "max"    ? SystemKind::Max
                                               : SystemKind::Additive;
            std::string definition = spec.value("definition", "cs");
            claim.definition =
                definition == "pursuit" ? DefinitionKind::Pursuit
                : definition == "nu"    ? DefinitionKind::Nu
                                        : DefinitionKind::Cs;
            std::string kind = spec.value("check_kind", "");
            claim.check_kind = kind == "chf"        ? Kind::Chf
                               : kind == "mellin"   ? Kind::Mellin
                               : kind == "pgf"      ? Kind::Pgf
                               : kind == "survival" ? Kind::Survival
                               : kind == "laplace"  ? Kind::Laplace
                                                    : claim.distribution.kinds.front();
            if (spec.contains("n"))
                for (auto& v : spec.at("n")) claim.n_range.push_back(v.get<int>());
            else
                claim.n_range = {1, 2, 3, 4};
            claim.tol = spec.value("tol", 1e-9);
            auto norm = spec.at("normalizer");
            if (norm.is_string() && norm.get<std::string>() == "solved") {
                claim.normalizers = solved_normalizer_family(
                    distribution_transform(claim.distribution, claim.check_kind),
                    claim.definition);
                claim.tol = spec.value("tol", 1e-6);
            } else {
                ParamMap np;
                if (norm.contains("params"))
                    for (auto& [k, v] : norm.at("params").items()) np[k] = v.get<double>();
                claim.normalizers =
                    make_normalizer_family(norm.at("id").get<std::string>(), np);
            }
            if (spec.contains("grid"))
                for (auto& v : spec.at("grid")) claim.grid.push_back(v.get<double>());
            else
                claim.grid = default_grid(claim.check_kind, claim.distribution);
        } catch (const std::exception& e) {
            err << "error: malformed spec file '" << target << "': " << e.what() << "\n";
            return 2;
        }
        CaseReport cr;
        cr.spec.id = target;
        cr.spec.title = "user spec";
        cr.spec.expected = expected;
        cr.reports.push_back(check_stability(claim));
        cr.verdict = verdict_name(cr.reports.front().verdict);
        cr.matches_expected = cr.verdict == expected;
        reports.push_back(std::move(cr));
    } else {
        err << "error: unknown case id or spec file '" << target << "'\n";
        return 2;
    }

    bool all_match = true;
    for (const auto& cr : reports) {
        out << cr.spec.id << ": " << cr.verdict << " (expected " << cr.spec.expected
            << "), worst residual ";
        double worst = 0.0;
        for (const auto& r : cr.reports) worst = std::max(worst, r.worst_residual);
        out << fmt17(worst) << "\n";
        for (const auto& e : cr.extras) out << "  " << e << "\n";
        if (!cr.matches_expected) all_match = false;
    }
    if (!json_path.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& cr : reports) arr.push_back(case_report_json(cr));
        emit_json(arr, json_path, out);
    }
    if (!csv_path.empty()) {
        auto f = open_output(csv_path);
        write_residual_csv(reports, f);
    }
    return all_match ? 0 : 1;
}

int report_all(std::uint64_t seed, const std::string& out_path, const std::string& csv_path,
               std::ostream& out) {
    std::vector<std::string> ids = case_ids();
    std::vector<std::future<CaseReport>> futures;
    futures.reserve(ids.size());
    for (const auto& id : ids)
        futures.push_back(std::async(std::launch::async, [id] { return run_case(id, {}); }));
    std::vector<CaseReport> reports;
    reports.reserve(ids.size());
    for (auto& f : futures) reports.push_back(f.get());

    ordered_json j;
    j["schema_version"] = 1;
    j["seed"] = seed;
    ordered_json cases = ordered_json::array();
    int matched = 0;
    for (const auto& cr : reports) {
        cases.push_back(case_report_json(cr));
        if (cr.matches_expected) ++matched;
    }
    j["cases"] = std::move(cases);
    j["summary"] = {{"total", reports.size()}, {"matched", matched}};
    emit_json(j, out_path, out);
    if (!csv_path.empty()) {
        auto f = open_output(csv_path);
        write_residual_csv(reports, f);
    }
    for (const auto& cr : reports)
        out << cr.spec.id << ": " << cr.verdict << (cr.matches_expected ? "" : "  <-- MISMATCH")
            << "\n";
    return matched == static_cast<int>(reports.size()) ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"random-normalization stability toolkit"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "check a catalog case or a JSON claim spec file");
    std::string target;
    std::vector<std::string> param_kvs;
    std::string json_path, csv_path;
    double tol_override = -1.0;
    verify->add_option("target", target, "case id (EX01..EX15, EX04G, EX05SWEEP) or spec file")
        ->required();
    verify->add_option("--param", param_kvs, "parameter override key=value (repeatable)");
    verify->add_option("--tol", tol_override, "residual tolerance override");
    verify->add_option("--json", json_path, "write the full JSON report here");
    verify->add_option("--csv", csv_path, "write the residual table (case,report,n,point,residual)");

    // coeffs
    auto* coeffs = app.add_subcommand("coeffs", "expand a catalog p.g.f. into series coefficients");
    std::string pgf_spec;
    int order = kDefaultSeriesOrder;
    double c_gamma = 0.5, c_a = 0.75, c_p = 0.5, c_lambda = 1.0;
    int c_n = 2, c_m = 1;
    std::string coeffs_csv;
    coeffs->add_option("pgf", pgf_spec,
                       "one of: eq13|tempered_discrete, eq14|tempered_discrete_normalizer, "
                       "sibuya, sibuya_normalizer, geometric, geometric_normalizer, "
                       "srw_passage, chebyshev_normalizer")
        ->required();
    coeffs->add_option("--order", order, "truncation order (default 64)");
    coeffs->add_option("--gamma", c_gamma, "shape parameter");
    coeffs->add_option("--a", c_a, "tempering parameter");
    coeffs->add_option("--p", c_p, "geometric parameter");
    coeffs->add_option("--lambda", c_lambda, "intensity");
    coeffs->add_option("--n", c_n, "normalizer index");
    coeffs->add_option("--m", c_m, "power index");
    coeffs->add_option("--csv", coeffs_csv, "write coefficients as CSV (k,coefficient)");

    // solve
    auto* solve = app.add_subcommand("solve", "solve the stability equation for the normalizer");
    std::string dist_spec, definition = "cs";
    double solve_n = 2;
    std::string solve_json, solve_csv;
    solve->add_option("dist", dist_spec, "distribution spec, e.g. gamma:b=1,gamma=2")->required();
    solve->add_option("--definition", definition, "cs or pursuit")->required();
    solve->add_option("--n", solve_n, "index (fractional values allowed)")->required();
    solve->add_option("--json", solve_json, "write solved values as JSON");
    solve->add_option("--csv", solve_csv, "write solved values as CSV (point,value)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo cross-check of a catalog case");
    std::string sim_case;
    std::size_t sim_samples = 200000;
    std::uint64_t sim_seed = 1;
    int sim_n = 2;
    std::string sim_json, sim_dump;
    simulate->add_option("case", sim_case, "case id with a registered sampler")->required();
    simulate->add_option("--samples", sim_samples, "sample count per side (default 2e5)");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--n", sim_n, "system size");
    simulate->add_option("--json", sim_json, "write the KS report as JSON");
    simulate->add_option("--samples-csv", sim_dump,
                         "export the normalized-system draws as CSV (one value per line)");

    // scan
    auto* scan = app.add_subcommand("scan", "coefficient nonnegativity sweep (target: ex05)");
    std::string scan_target, scan_grid;
    int scan_order = kDefaultSeriesOrder;
    std::string scan_json_path, scan_csv_path;
    scan->add_option("target", scan_target, "only 'ex05' is scannable")->required();
    scan->add_option("--grid", scan_grid, "gamma=lo:hi:step,a=lo:hi:step,n=lo:hi");
    scan->add_option("--order", scan_order, "truncation order");
    scan->add_option("--json", scan_json_path, "write the scan result as JSON");
    scan->add_option("--csv", scan_csv_path, "write violations as CSV (gamma,a,n,index,coeff)");

    // report
    auto* report = app.add_subcommand("report", "run the whole catalog (no Monte Carlo)");
    bool report_all_flag = false;
    std::uint64_t report_seed = 0;
    std::string report_out, report_csv;
    report->add_flag("--all", report_all_flag, "run every registered case");
    report->add_option("--seed", report_seed, "seed echoed into the report");
    report->add_option("--out", report_out, "JSON output path (stdout when omitted)");
    report->add_option("--csv", report_csv, "residual table output path");

    std::vector<std::string> argv_vec = args;
    try {
        app.parse(std::vector<std::string>(argv_vec.rbegin(), argv_vec.rend()));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (verify->parsed())
            return verify_command(target,
                                  [&] {
                                      ParamMap m = parse_kv_list(param_kvs);
                                      if (tol_override > 0) m["tol"] = tol_override;
                                      return m;
                                  }(),
                                  json_path, csv_path, out, err);

        if (coeffs->parsed()) {
            std::string family;
            try {
                family = pgf_family_for(pgf_spec);
            } catch (const std::exception& e) {
                err << "error: " << e.what() << "\n";
                return 2;
            }
            // Families read only the parameters they declare; extras are inert.
            ParamMap p{{"gamma", c_gamma},   {"a", c_a},         {"p", c_p},
                       {"lambda", c_lambda}, {"n", double(c_n)}, {"m", double(c_m)}};
            Transform q = make_transform(family, p);
            TruncatedSeries s = pgf_series(q, order);
            std::ostringstream csv;
            csv << "k,coefficient\n";
            for (int k = 0; k <= s.order(); ++k) csv << k << ',' << fmt17(s[k]) << "\n";
            if (coeffs_csv.empty()) out << csv.str();
            else open_output(coeffs_csv) << csv.str();
            return 0;
        }

        if (solve->parsed()) {
            auto [family, params] = parse_dist_spec(dist_spec);
            DistributionSpec dist = make_distribution(family, params);
            Kind kind = dist.kinds.front();
            Transform base = distribution_transform(dist, kind);
            DefinitionKind def = definition == "pursuit" ? DefinitionKind::Pursuit
                                                         : DefinitionKind::Cs;
            Transform g = solve_normalizer(base, def, solve_n);
            std::vector<double> grid = default_grid(g.kind(), dist);
            std::ostringstream csv;
            csv << "point,value\n";
            ordered_json arr = ordered_json::array();
            for (double x : grid) {
                double v = g.real_at(x);
                csv << fmt17(x) << ',' << fmt17(v) << "\n";
                arr.push_back(ordered_json{{"point", x}, {"value", v}});
            }
            ordered_json j{{"distribution", family},
                           {"definition", definition},
                           {"n", solve_n},
                           {"kind", kind_name(g.kind())},
                           {"values", arr}};
            if (!solve_csv.empty()) open_output(solve_csv) << csv.str();
            if (!solve_json.empty()) emit_json(j, solve_json, out);
            if (solve_csv.empty() && solve_json.empty()) out << csv.str();
            return 0;
        }

        if (simulate->parsed()) {
            if (!is_case_id(sim_case)) {
                err << "error: unknown case id '" << sim_case << "'\n";
                return 2;
            }
            CaseSpec spec = get_case(sim_case);
            if (!spec.mc_supported) {
                err << "error: case " << spec.id << " has no registered sampler path\n";
                return 2;
            }
            StabilityClaim claim = claim_for_case(spec, {});
            SimulationReport rep = simulate_and_test(claim, sim_n, sim_samples, sim_seed);
            rep.case_note = spec.id;
            out << spec.id << " n=" << sim_n << ": KS=" << fmt17(rep.ks.d)
                << " critical=" << fmt17(rep.critical) << (rep.pass ? " PASS" : " FAIL") << "\n";
            if (!sim_json.empty()) emit_json(simulation_json(rep), sim_json, out);
            if (!sim_dump.empty()) {
                SampleRun run;
                run.distribution = claim.distribution.family;
                run.normalizer = claim.normalizers.id;
                run.system = system_name(claim.system);
                run.n = sim_n;
                run.seed = sim_seed;
                run.samples = sample_normalized(claim.distribution, claim.normalizers, sim_n,
                                                claim.system, sim_samples, sim_seed);
                auto f = open_output(sim_dump);
                write_samples_csv(run, f);
            }
            return rep.pass ? 0 : 1;
        }

        if (scan->parsed()) {
            std::string lower = scan_target;
            for (auto& ch : lower) ch = static_cast<char>(std::tolower(ch));
            if (lower != "ex05" && lower != "ex05sweep") {
                err << "error: only ex05 supports coefficient scans\n";
                return 2;
            }
            std::vector<double> gammas, as;
            std::vector<int> ns;
            if (scan_grid.empty()) {
                for (int i = 1; i <= 10; ++i) gammas.push_back(i / 10.0);
                for (int j = 1; j <= 9; ++j) as.push_back(j / 10.0);
                for (int n = 2; n <= 16; ++n) ns.push_back(n);
            } else {
                std::stringstream ss(scan_grid);
                std::string part;
                while (std::getline(ss, part, ',')) {
                    auto eq = part.find('=');
                    if (eq == std::string::npos) {
                        err << "error: malformed --grid element '" << part << "'\n";
                        return 2;
                    }
                    std::string key = part.substr(0, eq);
                    std::vector<double> vals = parse_range(part.substr(eq + 1));
                    if (key == "gamma") gammas = vals;
                    else if (key == "a") as = vals;
                    else if (key == "n")
                        for (double v : vals) ns.push_back(static_cast<int>(std::lround(v)));
                    else {
                        err << "error: unknown --grid key '" << key << "'\n";
                        return 2;
                    }
                }
                if (gammas.empty()) gammas = {0.5};
                if (as.empty()) as = {0.75};
                if (ns.empty()) ns = {2};
            }
            ScanResult res = run_eq14_scan(gammas, as, ns, scan_order);
            out << "combinations=" << res.combinations << " violations=" << res.violations.size()
                << "\n";
            if (!scan_json_path.empty()) emit_json(scan_json(res), scan_json_path, out);
            if (!scan_csv_path.empty()) {
                auto f = open_output(scan_csv_path);
                f << "gamma,a,n,index,coeff\n";
                for (const auto& v : res.violations)
                    f << fmt17(v.gamma) << ',' << fmt17(v.a) << ',' << v.n << ',' << v.index
                      << ',' << fmt17(v.coeff) << "\n";
            }
            return 0;
        }

        if (report->parsed()) {
            if (!report_all_flag) {
                err << "error: report requires --all\n";
                return 2;
            }
            return report_all(report_seed, report_out, report_csv, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace cstab
