#include "polydrift/cli_app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ctime>
#include <filesystem>
#include <iomanip>

#include "polydrift/drift_engine.hpp"
#include "polydrift/drift_sim.hpp"
#include "polydrift/errors.hpp"
#include "polydrift/io.hpp"
#include "polydrift/tabular.hpp"

namespace polydrift {

namespace {

struct CliOptions {
    // shared
    int k = 2;
    int l = 2;
    double r2_threshold = 0.9;
    double bf_threshold = kDefaultThreshold2LnBf;
    std::uint64_t seed = 0;
    std::string sigma2_denom = "columns";
    bool no_timestamp = false;
    bool drop_incomplete_rows = false;
    std::vector<std::string> select_columns;
    // discover
    std::string csv_in;
    std::string profile_out;
    bool require_strong = false;
    // score
    std::string profile_in;
    std::string report_out;
    std::string report_csv;
    // simulate / experiment
    std::string kind;
    double r = 0.0;
    double u = 0.0;
    std::string target;
    std::vector<std::string> relevant;
    std::vector<std::string> sensitive;
    std::string out_path;
    std::string out_dir;
    std::vector<double> r_values;
    std::vector<double> u_values;
    int num_seeds = 10;
};

std::string now_iso8601_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

DiscoveryParams discovery_params(const CliOptions& opt) {
    if (opt.sigma2_denom != "columns" && opt.sigma2_denom != "rows")
        throw InvalidSpecError("--sigma2-denom must be 'columns' or 'rows'");
    DiscoveryParams params;
    params.k = opt.k;
    params.l = opt.l;
    params.r2_threshold = opt.r2_threshold;
    params.sigma2_denominator =
        opt.sigma2_denom == "rows" ? Sigma2Denominator::Rows : Sigma2Denominator::Columns;
    if (params.k < 1) throw InvalidSpecError("--k must be >= 1");
    if (params.l < 0) throw InvalidSpecError("--l must be >= 0");
    if (!(params.r2_threshold >= 0.0 && params.r2_threshold <= 1.0))
        throw InvalidSpecError("--r2-threshold must be in [0, 1]");
    return params;
}

CsvOptions csv_options(const CliOptions& opt) {
    CsvOptions options;
    options.drop_incomplete_rows = opt.drop_incomplete_rows;
    if (!opt.select_columns.empty()) options.select_columns = opt.select_columns;
    return options;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

UnfairnessRoles roles_from(const CliOptions& opt, const DataTable& table) {
    UnfairnessRoles roles{opt.target, opt.relevant, opt.sensitive};
    for (const auto& name : roles.relevant) {
        if (!table.column_index(name))
            throw InvalidSpecError("relevant feature not in table: " + name);
    }
    for (const auto& name : roles.sensitive) {
        if (!table.column_index(name))
            throw InvalidSpecError("sensitive feature not in table: " + name);
    }
    if (!roles.target.empty() && !table.column_index(roles.target))
        throw InvalidSpecError("target feature not in table: " + roles.target);
    return roles;
}

std::vector<std::uint64_t> seed_list(const CliOptions& opt) {
    if (opt.num_seeds < 1) throw InvalidSpecError("--num-seeds must be >= 1");
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(opt.num_seeds));
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = opt.seed + i;
    return seeds;
}

void print_relation_summary(std::ostream& out, const BaselineProfile& profile) {
    out << std::left << std::setw(20) << "target" << std::setw(36) << "features"
        << std::setw(12) << "r2" << "set\n";
    for (std::size_t i = 0; i < profile.relation_count(); ++i) {
        const Relation& relation = profile.relation(i);
        out << std::left << std::setw(20) << relation.target << std::setw(36)
            << join(relation.features, ",") << std::setw(12) << std::setprecision(6)
            << relation.fit.r2 << (profile.is_strong(i) ? "strong" : "weak") << "\n";
    }
    for (const auto& diagnostic : profile.relations.diagnostics) {
        out << "note: " << diagnostic << "\n";
    }
}

int cmd_discover(const CliOptions& opt, std::ostream& out) {
    const DataTable table = load_csv(opt.csv_in, csv_options(opt));
    BaselineProfile profile = build_profile(table, discovery_params(opt));
    profile.created_at = opt.no_timestamp ? "" : now_iso8601_utc();
    save_profile(profile, opt.profile_out);

    print_relation_summary(out, profile);
    out << "strong: " << profile.relations.strong.size()
        << "  weak: " << profile.relations.weak.size() << "\n"
        << "profile written to " << opt.profile_out << "\n";
    if (opt.require_strong && profile.relations.strong.empty())
        return exit_code::no_strong_relations;
    return exit_code::ok;
}

int cmd_score(const CliOptions& opt, std::ostream& out) {
    const BaselineProfile profile = load_profile(opt.profile_in);
    const DataTable field = load_csv(opt.csv_in, csv_options(opt));
    const DriftReport report = score_drift(profile, field, opt.bf_threshold);

    if (!opt.report_out.empty()) save_report_json(report, opt.report_out);
    if (!opt.report_csv.empty()) save_report_csv(report, opt.report_csv);

    out << std::left << std::setw(20) << "target" << std::setw(8) << "set" << std::setw(14)
        << "two_ln_bf" << std::setw(12) << "grade" << "decision\n";
    for (const auto& f : report.findings) {
        out << std::left << std::setw(20) << f.target << std::setw(8)
            << (f.strong_relation ? "strong" : "weak") << std::setw(14)
            << std::setprecision(6) << f.two_ln_bf << std::setw(12) << to_string(f.grade)
            << (f.drift ? "Drift" : "NoDrift") << "\n";
    }
    for (const auto& s : report.skipped) {
        out << "note: " << s.target << " skipped (" << s.reason << ")\n";
    }
    if (report.findings.empty()) {
        out << "no applicable relation for this table\n";
        return exit_code::schema_mismatch;
    }
    out << (report.any_strong_drift ? "strong-relation drift detected\n"
                                    : "no strong-relation drift\n");
    return report.any_strong_drift ? exit_code::drift_detected : exit_code::ok;
}

SimulationSpec simulation_spec(const CliOptions& opt, const DataTable& table) {
    SimulationSpec spec;
    if (opt.kind == "permute") {
        spec.kind = DriftKind::RowPermutation;
        spec.param = opt.r;
    } else if (opt.kind == "unfair") {
        spec.kind = DriftKind::Unfairness;
        spec.param = opt.u;
        spec.roles = roles_from(opt, table);
    } else {
        throw InvalidSpecError("--kind must be 'permute' or 'unfair'");
    }
    spec.seed = opt.seed;
    validate(spec);
    return spec;
}

int cmd_simulate(const CliOptions& opt, std::ostream& out) {
    const DataTable table = load_csv(opt.csv_in, csv_options(opt));
    const SimulationSpec spec = simulation_spec(opt, table);
    const DataTable drifted = apply_simulation(table, spec);
    write_csv(drifted, opt.out_path);
    out << "kind=" << to_string(spec.kind) << " param=" << spec.param << " seed=" << spec.seed
        << " rows=" << drifted.n_rows() << "\n"
        << "drifted table written to " << opt.out_path << "\n";
    return exit_code::ok;
}

int cmd_experiment(const CliOptions& opt, std::ostream& out) {
    const DataTable table = load_csv(opt.csv_in, csv_options(opt));
    const DiscoveryParams params = discovery_params(opt);
    const std::vector<std::uint64_t> seeds = seed_list(opt);

    SweepResult sweep;
    if (opt.kind == "permute") {
        sweep = run_permutation_sweep(table, params, opt.r_values, seeds, opt.bf_threshold);
    } else if (opt.kind == "unfair") {
        sweep = run_unfairness_sweep(table, roles_from(opt, table), opt.u_values, seeds, params,
                                     opt.bf_threshold);
    } else {
        throw InvalidSpecError("--kind must be 'permute' or 'unfair'");
    }

    std::filesystem::create_directories(opt.out_dir);
    const auto records_path = std::filesystem::path(opt.out_dir) / "sweep_records.csv";
    const auto aggregate_path = std::filesystem::path(opt.out_dir) / "sweep_aggregate.csv";
    write_file_atomic(records_path, sweep_records_csv(sweep));
    write_file_atomic(aggregate_path, sweep_aggregate_csv(sweep));

    // Monotonicity summary: Spearman of the median score against the drift
    // parameter, per relation.
    out << std::left << std::setw(20) << "target" << std::setw(8) << "set"
        << "spearman(median_two_ln_bf, param)\n";
    if (!sweep.points.empty()) {
        for (const auto& relation : sweep.points.front().per_relation) {
            std::vector<double> params_axis, medians;
            for (const auto& point : sweep.points) {
                for (const auto& r : point.per_relation) {
                    if (r.target == relation.target) {
                        params_axis.push_back(point.param);
                        medians.push_back(r.median_two_ln_bf);
                    }
                }
            }
            out << std::left << std::setw(20) << relation.target << std::setw(8)
                << (relation.strong_relation ? "strong" : "weak");
            if (params_axis.size() < 2) {
                out << "n/a\n";
                continue;
            }
            try {
                out << std::setprecision(4) << spearman(medians, params_axis) << "\n";
            } catch (const ZeroVarianceError&) {
                out << "n/a (constant)\n";
            }
        }
    }
    out << "sweep written to " << records_path.string() << " and " << aggregate_path.string()
        << "\n";
    return exit_code::ok;
}

int map_error(const Error& e, std::ostream& err, int code) {
    err << "error: " << e.what() << "\n";
    return code;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CliOptions opt;
    CLI::App app{"drift detection for numeric tabular data via polynomial feature relations"};
    app.require_subcommand(1);

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--k", opt.k, "features per relation")->capture_default_str();
        cmd->add_option("--l", opt.l, "max polynomial degree")->capture_default_str();
        cmd->add_option("--r2-threshold", opt.r2_threshold, "strong-relation R^2 retention threshold")
            ->capture_default_str();
        cmd->add_option("--bf-threshold", opt.bf_threshold, "drift decision threshold on 2*ln(BF)")
            ->capture_default_str();
        cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
        cmd->add_option("--sigma2-denom", opt.sigma2_denom,
                        "error variance denominator: 'columns' (design width; size-stable "
                        "drift scores) or 'rows' (MLE)")
            ->capture_default_str();
        cmd->add_flag("--no-timestamp", opt.no_timestamp, "omit timestamps from outputs");
        cmd->add_flag("--drop-incomplete-rows", opt.drop_incomplete_rows,
                      "drop rows with unparseable cells instead of failing");
        cmd->add_option("--select-columns", opt.select_columns, "columns to ingest")
            ->delimiter(',');
    };

    CLI::App* discover = app.add_subcommand("discover", "find polynomial relations in a CSV");
    add_shared(discover);
    discover->add_option("csv", opt.csv_in, "input CSV")->required();
    discover->add_option("--profile-out", opt.profile_out, "output profile path")->required();
    discover->add_flag("--require-strong", opt.require_strong,
                       "exit 2 when no strong relation is found");

    CLI::App* score = app.add_subcommand("score", "score field data against a profile");
    add_shared(score);
    score->add_option("csv", opt.csv_in, "field CSV")->required();
    score->add_option("--profile", opt.profile_in, "baseline profile path")->required();
    score->add_option("--report-out", opt.report_out, "drift report (JSON)");
    score->add_option("--report-csv", opt.report_csv, "drift report (CSV)");

    CLI::App* simulate = app.add_subcommand("simulate", "inject drift into a CSV");
    add_shared(simulate);
    simulate->add_option("csv", opt.csv_in, "input CSV")->required();
    simulate->add_option("--kind", opt.kind, "permute | unfair")->required();
    simulate->add_option("--r", opt.r, "permuted proportion in [0, 1]");
    simulate->add_option("--u", opt.u, "unfairness parameter >= 0");
    simulate->add_option("--target", opt.target, "synthetic target feature (unfair)");
    simulate->add_option("--relevant", opt.relevant, "relevant features (unfair)")->delimiter(',');
    simulate->add_option("--sensitive", opt.sensitive, "sensitive features (unfair)")
        ->delimiter(',');
    simulate->add_option("--out", opt.out_path, "output CSV path")->required();

    CLI::App* experiment =
        app.add_subcommand("experiment", "split/discover/inject/score parameter sweep");
    add_shared(experiment);
    experiment->add_option("csv", opt.csv_in, "input CSV")->required();
    experiment->add_option("--kind", opt.kind, "permute | unfair")->required();
    experiment->add_option("--r-values", opt.r_values, "ascending permuted proportions")
        ->delimiter(',');
    experiment->add_option("--u-values", opt.u_values, "ascending unfairness values, from 0")
        ->delimiter(',');
    experiment->add_option("--num-seeds", opt.num_seeds, "seeds used, starting at --seed")
        ->capture_default_str();
    experiment->add_option("--target", opt.target, "synthetic target feature (unfair)");
    experiment->add_option("--relevant", opt.relevant, "relevant features (unfair)")
        ->delimiter(',');
    experiment->add_option("--sensitive", opt.sensitive, "sensitive features (unfair)")
        ->delimiter(',');
    experiment->add_option("--out-dir", opt.out_dir, "output directory")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::invalid_spec;
    }

    try {
        if (app.got_subcommand(discover)) return cmd_discover(opt, out);
        if (app.got_subcommand(score)) return cmd_score(opt, out);
        if (app.got_subcommand(simulate)) return cmd_simulate(opt, out);
        return cmd_experiment(opt, out);
    } catch (const InvalidSpecError& e) {
        return map_error(e, err, exit_code::invalid_spec);
    } catch (const InvalidFractionError& e) {
        return map_error(e, err, exit_code::invalid_spec);
    } catch (const TableTooSmallError& e) {
        return map_error(e, err, exit_code::invalid_spec);
    } catch (const ZeroVarianceError& e) {
        return map_error(e, err, exit_code::invalid_spec);
    } catch (const EmptyProfileError& e) {
        return map_error(e, err, exit_code::schema_mismatch);
    } catch (const Error& e) {
        return map_error(e, err, exit_code::io_error);
    }
}

}  // namespace polydrift
