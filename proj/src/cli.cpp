#include "irtforge/cli.hpp"

#include <array>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "irtforge/augment.hpp"
#include "irtforge/calibrate.hpp"
#include "irtforge/dataio.hpp"
#include "irtforge/error.hpp"
#include "irtforge/evaluate.hpp"
#include "irtforge/fpc.hpp"
#include "irtforge/random.hpp"
#include "irtforge/report.hpp"
#include "irtforge/simulate.hpp"

namespace irtforge {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string responses;
    std::string bank;
    std::string format = "wide";
    int grid_count = kDefaultGridCount;
    double grid_span = kDefaultGridSpan;
    std::optional<double> tol;
    int max_cycles = 500;
    int inner_updates = 10;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
    bool anchor = false;

    // experiment
    std::string humans;
    std::string synthetic;
    std::string half_sample;
    // simulate
    std::string spec;
    bool paper_analogue = false;
    std::optional<double> missing_rate;
    // report
    std::string bundle_path;
    std::string experiment_path;
    std::string render = "text";
};

class Command {
public:
    Command(const RunConfig& cfg, std::ostream& out, std::shared_ptr<spdlog::logger> log)
        : cfg_(cfg), out_(out), log_(std::move(log)) {}

    int calibrate();
    int fpc();
    int experiment();
    int simulate();
    int report();

private:
    QuadratureGrid grid() const { return make_grid(cfg_.grid_count, cfg_.grid_span); }
    ResponseFormat format() const { return response_format_from_string(cfg_.format); }
    fs::path out_dir() const {
        if (cfg_.out.empty()) throw InvalidArgument("--out is required");
        fs::create_directories(cfg_.out);
        return cfg_.out;
    }
    std::uint64_t require_seed() const {
        if (!cfg_.seed) throw InvalidArgument("--seed is required for this command");
        return *cfg_.seed;
    }
    ResponseMatrix load_matrix(const std::string& path, const ItemBank* bank) const {
        LoadOptions opts;
        opts.bank = bank;
        LoadReport rep;
        auto m = load_responses(path, format(), opts, &rep);
        log_->info("{}: read {} rows, retained {}, {} items, {} missing cells", path, rep.rows_read,
                   rep.rows_retained, rep.items, m.missing_cells());
        return m;
    }
    Calibration run_calibration(const ResponseMatrix& matrix) const {
        CalibrationOptions opts;
        opts.tol = cfg_.tol.value_or(1e-4);
        opts.max_cycles = cfg_.max_cycles;
        opts.threads = cfg_.threads;
        auto cal = calibrate_mml(matrix, grid(), opts);
        log_->info("calibration: {} cycles, max change {:.3g}, converged={}", cal.convergence.cycles,
                   cal.convergence.max_param_change, cal.convergence.converged);
        if (!cal.convergence.converged) log_->warn("item calibration did not converge");
        return cal;
    }
    MwuMemOptions mwu_options() const {
        MwuMemOptions opts;
        opts.inner_updates = cfg_.inner_updates;
        opts.tol = cfg_.tol.value_or(kDefaultWeightTol);
        opts.max_cycles = cfg_.max_cycles;
        opts.threads = cfg_.threads;
        return opts;
    }
    void write_maps(const fs::path& dir, const std::string& stem, const ItemParams& params,
                    const AbilityEstimates& abilities) const {
        write_file(dir / (stem + ".txt"), render_wright_map(params, abilities, MapFormat::text));
        write_file(dir / (stem + ".svg"), render_wright_map(params, abilities, MapFormat::svg));
    }

    const RunConfig& cfg_;
    std::ostream& out_;
    std::shared_ptr<spdlog::logger> log_;
};

// Columns restricted to ok items of `params`, rows with no observed ok item
// dropped.
ResponseMatrix scoreable(const ResponseMatrix& matrix, const ItemParams& params) {
    std::vector<std::string> ok;
    for (const auto& id : matrix.item_ids()) {
        const ItemEstimate* e = params.find(id);
        if (e && e->status == ItemStatus::ok) ok.push_back(id);
    }
    const ResponseMatrix cols = matrix.with_columns(ok);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < cols.num_respondents(); ++i)
        if (cols.observed_in_row(i) > 0) rows.push_back(i);
    return cols.select_rows(rows);
}

struct Scores {
    LatentEstimate latent;
    AbilityEstimates abilities;
};

Scores score_group(const ResponseMatrix& matrix, const ItemParams& params, const QuadratureGrid& grid,
                   const MwuMemOptions& opts) {
    const ResponseMatrix usable = scoreable(matrix, params);
    Scores s;
    s.latent = estimate_latent_mwu_mem(usable, params, grid, opts);
    s.abilities = person_fit(usable, params, eap_scores(usable, params, s.latent.latent));
    return s;
}

std::vector<double> thetas_of(const AbilityEstimates& abilities) {
    std::vector<double> out;
    out.reserve(abilities.size());
    for (const auto& a : abilities) out.push_back(a.theta_hat);
    return out;
}

int Command::calibrate() {
    if (cfg_.responses.empty() || cfg_.bank.empty()) throw InvalidArgument("--responses and --bank are required");
    const ItemBank bank = load_item_bank(cfg_.bank);
    const ResponseMatrix matrix = load_matrix(cfg_.responses, &bank);
    const fs::path dir = out_dir();
    const QuadratureGrid g = grid();
    const Calibration cal = run_calibration(matrix);

    ResultBundle bundle;
    bundle.label = "calibrate";
    bundle.item_params = cal.params;
    bundle.latent = LatentDist::from_grid(g);
    const ResponseMatrix usable = scoreable(matrix, cal.params);
    bundle.ability = person_fit(usable, cal.params, eap_scores(usable, cal.params, bundle.latent));
    bundle.convergence = {cal.convergence.cycles, cal.convergence.max_param_change, cal.convergence.converged};
    bundle.seed = cfg_.seed;
    bundle.provenance.inputs = {digest_file(cfg_.responses), digest_file(cfg_.bank)};
    bundle.composition = matrix.source_counts();
    write_bundle(bundle, dir / "bundle.json");
    write_maps(dir, "wright_map", cal.params, *bundle.ability);
    out_ << "wrote " << (dir / "bundle.json").string() << "\n";
    return cal.convergence.converged ? kExitOk : kExitWarning;
}

int Command::fpc() {
    if (cfg_.responses.empty() || cfg_.bank.empty()) throw InvalidArgument("--responses and --bank are required");
    const ItemBank bank = load_item_bank(cfg_.bank);
    if (!bank.has_all_fixed_difficulties())
        throw InputError(cfg_.bank, 0, "every item needs a fixed_difficulty for fixed-parameter calibration");
    const ItemParams fixed = fixed_params_from_bank(bank);
    const ResponseMatrix matrix = load_matrix(cfg_.responses, &bank);
    const fs::path dir = out_dir();
    const QuadratureGrid g = grid();
    const MwuMemOptions opts = mwu_options();

    const Scores pooled = score_group(matrix, fixed, g, opts);
    bool converged = pooled.latent.converged;

    ResultBundle bundle;
    bundle.label = "fpc";
    bundle.item_params = fixed;
    bundle.latent = pooled.latent.latent;
    bundle.convergence = {pooled.latent.cycles, pooled.latent.max_weight_change, pooled.latent.converged};
    bundle.seed = cfg_.seed;
    bundle.provenance.inputs = {digest_file(cfg_.responses), digest_file(cfg_.bank)};
    bundle.composition = matrix.source_counts();

    std::map<std::string, AbilityEstimate> by_id;
    for (const auto& [source, count] : matrix.source_counts()) {
        const Scores s = score_group(matrix.filter_source(source), fixed, g, opts);
        converged = converged && s.latent.converged;
        if (!s.latent.converged) log_->warn("latent distribution for source '{}' did not converge", source);
        bundle.latent_by_source[source] = s.latent.latent;
        for (const auto& a : s.abilities) by_id[a.respondent_id] = a;
        if (s.abilities.size() >= 2) bundle.dist_stats.push_back(dist_stats(thetas_of(s.abilities), source));
        else log_->warn("source '{}' has fewer than 2 scored respondents; no distribution row", source);
    }
    AbilityEstimates abilities;
    for (const auto& r : matrix.respondents())
        if (auto it = by_id.find(r.respondent_id); it != by_id.end()) abilities.push_back(it->second);
    bundle.ability = abilities;
    bundle.convergence.converged = converged;

    write_bundle(bundle, dir / "bundle.json");
    write_file(dir / "proficiency.txt", render_distribution_table(bundle.dist_stats, ReportFormat::text));
    write_file(dir / "proficiency.json", render_distribution_table(bundle.dist_stats, ReportFormat::json));
    write_maps(dir, "wright_map", fixed, abilities);
    out_ << render_distribution_table(bundle.dist_stats, ReportFormat::text);
    return converged ? kExitOk : kExitWarning;
}

std::vector<std::string> read_id_list(const std::string& path) {
    std::vector<std::string> ids;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() != '#') ids.push_back(line);
    }
    if (ids.empty()) throw InputError(path, 0, "half-sample id list is empty");
    return ids;
}

int Command::experiment() {
    if (cfg_.humans.empty() || cfg_.synthetic.empty()) throw InvalidArgument("--humans and --synthetic are required");
    const std::uint64_t seed = require_seed();
    std::optional<ItemBank> bank;
    if (!cfg_.bank.empty()) bank = load_item_bank(cfg_.bank);
    const ItemBank* bank_ptr = bank ? &*bank : nullptr;
    const ResponseMatrix humans = load_matrix(cfg_.humans, bank_ptr);
    const ResponseMatrix synthetic = load_matrix(cfg_.synthetic, bank_ptr);
    const fs::path dir = out_dir();
    const QuadratureGrid g = grid();

    std::vector<std::string> half = cfg_.half_sample.empty() ? default_half_sample(humans) : read_id_list(cfg_.half_sample);
    std::vector<std::size_t> half_rows;
    for (const auto& id : half) {
        const auto i = humans.respondent_index(id);
        if (!i) throw InputError(cfg_.half_sample, 0, "unknown human respondent '" + id + "'");
        half_rows.push_back(*i);
    }
    const MatchPlan plan = match_centroids(humans.select_rows(half_rows), synthetic);
    const MixingProportions proportions = learn_proportions(plan, synthetic);
    for (const auto& f : proportions.fractions) log_->info("proportion {}: {:.3f}", f.source, f.fraction);
    write_file(dir / "match_plan.json", canonical_json(nlohmann::json(plan)));
    write_file(dir / "proportions.json", canonical_json(nlohmann::json(proportions)));

    Provenance provenance;
    provenance.inputs = {digest_file(cfg_.humans), digest_file(cfg_.synthetic)};
    if (bank) provenance.inputs.push_back(digest_file(cfg_.bank));

    const PoolInputs inputs{humans, synthetic, plan, proportions, half};
    const std::array<Condition, 5> conditions{Condition::benchmark, Condition::exp1, Condition::exp2,
                                              Condition::exp3, Condition::exp4};
    std::vector<LabelledParams> calibrations;
    std::vector<DistStats> stats;
    bool converged = true;
    ItemParams benchmark;
    for (Condition c : conditions) {
        const ExperimentPool pool = build_experiment_pool(c, inputs, seed);
        log_->info("{}: {} respondents", to_string(c), pool.matrix.num_respondents());
        save_responses(pool.matrix, dir / fmt::format("pool_{}.csv", to_string(c)), ResponseFormat::wide_csv,
                       fmt::format("irtforge {} experiment condition={} seed={}", kToolVersion, to_string(c), seed));
        const Calibration cal = run_calibration(pool.matrix);
        converged = converged && cal.convergence.converged;
        if (c == Condition::benchmark) benchmark = cal.params;

        // Proficiency of each pool with items fixed at the benchmark values.
        const Scores s = score_group(pool.matrix, benchmark, g, mwu_options());
        converged = converged && s.latent.converged;
        const DistStats ds = dist_stats(thetas_of(s.abilities), display_label(c));
        stats.push_back(ds);

        ResultBundle bundle;
        bundle.label = to_string(c);
        bundle.item_params = cal.params;
        bundle.latent = s.latent.latent;
        bundle.ability = s.abilities;
        bundle.convergence = {cal.convergence.cycles, cal.convergence.max_param_change, cal.convergence.converged};
        bundle.seed = seed;
        bundle.provenance = provenance;
        bundle.dist_stats = {ds};
        bundle.composition = pool.composition;
        if (c == Condition::exp2) bundle.match_plan = plan;
        if (c == Condition::exp3 || c == Condition::exp4) bundle.proportions = proportions;
        write_bundle(bundle, dir / fmt::format("bundle_{}.json", to_string(c)));
        write_maps(dir, fmt::format("wright_{}", to_string(c)), cal.params, s.abilities);
        calibrations.emplace_back(display_label(c), cal.params);
    }

    const ComparisonReport report = compare_calibrations(benchmark, calibrations, cfg_.anchor);
    const std::string text = render_experiment_report(report, stats, ReportFormat::text);
    write_file(dir / "report.txt", text);
    write_file(dir / "report.json", render_experiment_report(report, stats, ReportFormat::json));
    out_ << text;
    return converged ? kExitOk : kExitWarning;
}

int Command::simulate() {
    if (cfg_.bank.empty()) throw InvalidArgument("--bank is required");
    if (cfg_.spec.empty() == !cfg_.paper_analogue)
        throw InvalidArgument("give exactly one of --spec or --paper-analogue");
    const std::uint64_t seed = require_seed();
    const ItemBank bank = load_item_bank(cfg_.bank);
    if (!bank.has_all_fixed_difficulties())
        throw InputError(cfg_.bank, 0, "simulation needs a fixed_difficulty for every item");
    PopulationSpec spec = cfg_.paper_analogue ? paper_analogue_population() : load_population_spec(cfg_.spec);
    spec.seed = seed;
    if (cfg_.missing_rate) spec.missing_rate = *cfg_.missing_rate;
    validate(spec);
    const fs::path dir = out_dir();

    PopulationSpec theta_spec = spec;
    theta_spec.seed = derive_seed(seed, 0);
    const auto thetas = sample_thetas(theta_spec);
    const ResponseMatrix matrix =
        simulate_responses(thetas, bank.item_ids(), bank.fixed_difficulties(), spec.missing_rate, derive_seed(seed, 1));

    const std::string spec_json = canonical_json(nlohmann::json(spec));
    const std::string comment =
        fmt::format("irtforge {} simulate seed={} bank_sha256={} spec_sha256={}", kToolVersion, seed,
                    digest_file(cfg_.bank).sha256, sha256_hex(spec_json));
    save_responses(matrix, dir / "responses.csv", ResponseFormat::wide_csv, comment);
    save_responses(matrix, dir / "responses.jsonl", ResponseFormat::long_jsonl, comment);
    std::string truth = "# " + comment + "\nrespondent_id,source,theta\n";
    for (const auto& t : thetas) truth += fmt::format("{},{},{:.6g}\n", t.respondent_id, t.source, t.theta);
    write_file(dir / "thetas.csv", truth);
    write_file(dir / "population.json", spec_json);
    out_ << fmt::format("wrote {} respondents x {} items to {}\n", matrix.num_respondents(), matrix.num_items(),
                        dir.string());
    return kExitOk;
}

int Command::report() {
    if (cfg_.bundle_path.empty() == cfg_.experiment_path.empty())
        throw InvalidArgument("give exactly one of --bundle or --experiment");
    std::string doc;
    int code = kExitOk;
    if (!cfg_.bundle_path.empty()) {
        const ResultBundle bundle = load_bundle(cfg_.bundle_path);
        const AbilityEstimates none;
        doc = render_wright_map(bundle.item_params, bundle.ability ? *bundle.ability : none,
                                map_format_from_string(cfg_.render));
        if (!bundle.convergence.converged) {
            log_->warn("{}: bundle records a non-converged run", cfg_.bundle_path);
            code = kExitWarning;
        }
    } else {
        const std::string text = read_file(cfg_.experiment_path);
        const ComparisonReport rep = parse_comparison_report(text, cfg_.experiment_path);
        std::vector<DistStats> stats;
        const auto j = nlohmann::json::parse(text);
        if (j.contains("distributions")) stats = j["distributions"].get<std::vector<DistStats>>();
        doc = render_experiment_report(rep, stats, report_format_from_string(cfg_.render));
    }
    if (cfg_.out.empty()) out_ << doc;
    else write_file(cfg_.out, doc);
    return code;
}

spdlog::level::level_enum log_level_from_env() {
    const char* env = std::getenv("IRTFORGE_LOG");
    if (!env || !*env) return spdlog::level::warn;
    return spdlog::level::from_str(env);
}

void add_model_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--grid-count", cfg.grid_count, "quadrature nodes (odd, >= 11)")->capture_default_str();
    cmd->add_option("--grid-span", cfg.grid_span, "nodes cover [-span, span]")->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "convergence tolerance (default 1e-4 items, 1e-3 weights)");
    cmd->add_option("--max-cycles", cfg.max_cycles, "EM cycle cap")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "worker cap; results do not depend on it")->capture_default_str();
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_option("--format", cfg.format, "response file format: wide or long")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "64-bit seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto log = std::make_shared<spdlog::logger>("irtforge", sink);
    log->set_pattern("[%l] %v");
    log->set_level(log_level_from_env());

    RunConfig cfg;
    CLI::App app{"irtforge: Rasch calibration and synthetic-respondent augmentation"};
    app.require_subcommand(1);

    auto* calibrate = app.add_subcommand("calibrate", "MML-EM item calibration");
    calibrate->add_option("--responses", cfg.responses, "response matrix")->required();
    calibrate->add_option("--bank", cfg.bank, "item bank JSON")->required();
    add_model_options(calibrate, cfg);

    auto* fpc = app.add_subcommand("fpc", "fixed-parameter calibration (MWU-MEM) and EAP scoring");
    fpc->add_option("--responses", cfg.responses, "response matrix")->required();
    fpc->add_option("--bank", cfg.bank, "item bank JSON with fixed difficulties")->required();
    fpc->add_option("--inner-updates", cfg.inner_updates, "weight updates per EM cycle")->capture_default_str();
    add_model_options(fpc, cfg);

    auto* experiment = app.add_subcommand("experiment", "benchmark plus augmentation experiments 1-4");
    experiment->add_option("--humans", cfg.humans, "human response matrix")->required();
    experiment->add_option("--synthetic", cfg.synthetic, "synthetic response matrix")->required();
    experiment->add_option("--bank", cfg.bank, "item bank JSON (optional)");
    experiment->add_option("--half-sample", cfg.half_sample, "file with one human id per line");
    experiment->add_option("--inner-updates", cfg.inner_updates, "weight updates per EM cycle")->capture_default_str();
    experiment->add_flag("--anchor", cfg.anchor, "anchor each calibration to the benchmark before RMSE");
    add_model_options(experiment, cfg);

    auto* simulate = app.add_subcommand("simulate", "simulate Rasch responses from a population spec");
    simulate->add_option("--spec", cfg.spec, "population spec JSON");
    simulate->add_flag("--paper-analogue", cfg.paper_analogue, "use the built-in seven-component population");
    simulate->add_option("--bank", cfg.bank, "item bank JSON with fixed difficulties")->required();
    simulate->add_option("--missing-rate", cfg.missing_rate, "override the spec's missing rate");
    simulate->add_option("--out", cfg.out, "output directory")->required();
    simulate->add_option("--seed", cfg.seed, "64-bit seed")->required();

    auto* report = app.add_subcommand("report", "render a bundle's Wright map or an experiment report");
    report->add_option("--bundle", cfg.bundle_path, "result bundle JSON");
    report->add_option("--experiment", cfg.experiment_path, "experiment report JSON");
    report->add_option("--render", cfg.render, "text, svg (bundle) or text, json (experiment)")->capture_default_str();
    report->add_option("--out", cfg.out, "output file (default stdout)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        Command cmd(cfg, out, log);
        if (*calibrate) return cmd.calibrate();
        if (*fpc) return cmd.fpc();
        if (*experiment) return cmd.experiment();
        if (*simulate) return cmd.simulate();
        return cmd.report();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace irtforge
