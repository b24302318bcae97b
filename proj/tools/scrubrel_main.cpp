// scrubrel: reliability and MTTF of SEC-DED-protected memory under
// probabilistic, deterministic, and mixed scrubbing.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "scrubrel/scrubrel.hpp"

namespace {

struct CommonFlags {
    scrubrel::SystemSpec spec;
    std::string model = "probabilistic";
    long long words = 0;
    long long megabytes = 0;
    double period_seconds = 0.0;
    double mu_per_second = -1.0;
    int check_bits = -1;

    void attach(CLI::App* cmd, bool with_model = true) {
        cmd->add_option("--lambda", spec.lambda_per_bit_day,
                        "per-bit transient upset rate, upsets/bit/day")
            ->required();
        cmd->add_option("-w,--data-bits", spec.data_bits, "data bits per word (default 32)");
        cmd->add_option("-c,--check-bits", check_bits,
                        "SEC-DED check bits per word (default: smallest valid count)");
        cmd->add_option("-M,--words", words, "memory size in words");
        cmd->add_option("--megabytes", megabytes, "memory size in MB (1 MB = 2^20 bytes)");
        cmd->add_option("-T,--period-seconds", period_seconds,
                        "deterministic sweep interval in seconds");
        cmd->add_option("--mu", mu_per_second, "probabilistic access/scrub rate per second");
        if (with_model)
            cmd->add_option("--model", model, "probabilistic | deterministic | mixed")
                ->check(CLI::IsMember({"probabilistic", "prob", "deterministic", "det",
                                       "mixed", "mix"}));
    }

    scrubrel::SystemSpec resolve() {
        scrubrel::SystemSpec s = spec;
        if (check_bits >= 0) s.check_bits = check_bits;
        if (words > 0) s.memory_words = words;
        if (megabytes > 0) s.megabytes = megabytes;
        if (period_seconds > 0.0) s.period_seconds = period_seconds;
        if (mu_per_second >= 0.0) s.mu_per_second = mu_per_second;
        return s;
    }

    scrubrel::Model resolve_model() const {
        const auto m = scrubrel::model_from_string(model);
        if (!m) throw scrubrel::ValidationError("unknown model '" + model + "'");
        return *m;
    }
};

void emit(const scrubrel::OutputRecord& rec, const std::string& format,
          const std::string& out_path) {
    const std::string text = scrubrel::serialize(rec, format == "json");
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw scrubrel::ValidationError("cannot open output file '" + out_path + "'");
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability and MTTF of scrubbed SEC-DED memory systems"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    std::string format = "csv";
    std::string out_path;
    app.add_option("--format", format, "csv | json (env SCRUBREL_FORMAT)")
        ->envname("SCRUBREL_FORMAT")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "write output to a file instead of stdout");

    // reliability
    auto* rel = app.add_subcommand("reliability", "system reliability curve R(t)");
    CommonFlags rel_flags;
    rel_flags.attach(rel, /*with_model=*/false);
    std::vector<std::string> rel_models;
    double t_max_days = 0.0, t_min_days = 0.0;
    int points = 101;
    bool log_grid = false;
    rel->add_option("--model", rel_models, "model(s); repeat or comma separate; default all")
        ->delimiter(',');
    rel->add_option("--t-max-days", t_max_days, "last sample time in days")->required();
    rel->add_option("--points", points, "number of samples (default 101)");
    rel->add_flag("--log-grid", log_grid, "log-spaced time grid");
    rel->add_option("--t-min-days", t_min_days, "first sample for log grids");

    // mttf
    auto* mttf = app.add_subcommand("mttf", "mean time to failure in days");
    CommonFlags mttf_flags;
    mttf_flags.attach(mttf);
    std::string method = "all";
    double rel_tol = 1e-9;
    std::vector<double> sweep_periods;
    mttf->add_option("--method", method,
                     "closed | closed_data_bits | quadrature | renewal | bounds | all")
        ->check(CLI::IsMember(
            {"closed", "closed_data_bits", "quadrature", "renewal", "bounds", "all"}));
    mttf->add_option("--rel-tol", rel_tol, "quadrature relative tolerance (default 1e-9)");
    mttf->add_option("--sweep-period-seconds", sweep_periods,
                     "evaluate a list of sweep intervals (deterministic/mixed)")
        ->delimiter(',');

    // table
    auto* table = app.add_subcommand(
        "table", "regenerate a published table and report deviations");
    int table_id = 0;
    std::string variant;
    std::string mb_convention = "binary";
    table->add_option("--paper", table_id, "published table number (1-7)")
        ->required()
        ->check(CLI::Range(1, 7));
    table->add_option("--variant", variant, "table 4 only: 'w34' uses the caption's word size")
        ->check(CLI::IsMember({"", "w34", "w64"}));
    table->add_option("--mb-convention", mb_convention, "binary (2^20, default) | decimal (10^6)")
        ->check(CLI::IsMember({"binary", "decimal"}));

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo fault injection");
    CommonFlags sim_flags;
    sim_flags.attach(sim);
    scrubrel::SimulateOptions sim_opt;
    std::string level = "state";
    sim->add_option("--trials", sim_opt.trials, "number of trials (default 10000)");
    sim->add_option("--seed", sim_opt.seed, "master seed (default 1)");
    sim->add_option("--level", level, "state | bit")->check(CLI::IsMember({"state", "bit"}));
    sim->add_option("--horizon-days", sim_opt.horizon_days, "simulation horizon in days")
        ->required();
    sim->add_option("--times-days", sim_opt.times_days,
                    "survival sample times (default: 5 even checkpoints)")
        ->delimiter(',');
    sim->add_option("--threads", sim_opt.threads, "worker threads (default: all cores)");
    sim->add_flag("--compare", sim_opt.compare, "add analytic survival and z-score columns");
    int system_words = 0;
    sim->add_option("--system-words", system_words,
                    "sample system MTTF for this many words instead of word survival");

    try {
        app.parse(argc, argv);

        scrubrel::OutputRecord rec;
        if (rel->parsed()) {
            scrubrel::ReliabilityOptions opt;
            opt.spec = rel_flags.resolve();
            for (const auto& name : rel_models) {
                const auto m = scrubrel::model_from_string(name);
                if (!m) throw scrubrel::ValidationError("unknown model '" + name + "'");
                opt.models.push_back(*m);
            }
            opt.t_max_days = t_max_days;
            opt.t_min_days = t_min_days;
            opt.points = points;
            opt.log_grid = log_grid;
            rec = scrubrel::cmd_reliability(opt);
        } else if (mttf->parsed()) {
            scrubrel::MttfOptions opt;
            opt.spec = mttf_flags.resolve();
            opt.model = mttf_flags.resolve_model();
            opt.method = method == "renewal" ? "renewal" : method;
            opt.rel_tol = rel_tol;
            opt.sweep_period_seconds = sweep_periods;
            rec = scrubrel::cmd_mttf(opt);
        } else if (table->parsed()) {
            scrubrel::TableOptions opt;
            opt.table_id = table_id;
            opt.ladder.tab4_wordsize_34 = variant == "w34";
            opt.ladder.convention = mb_convention == "decimal"
                                        ? scrubrel::tables::MbConvention::Decimal
                                        : scrubrel::tables::MbConvention::Binary;
            rec = scrubrel::cmd_table(opt);
        } else {
            sim_opt.spec = sim_flags.resolve();
            sim_opt.model = sim_flags.resolve_model();
            sim_opt.level = level == "bit" ? scrubrel::SimLevel::Bit : scrubrel::SimLevel::State;
            if (system_words > 0) sim_opt.system_words = system_words;
            rec = scrubrel::cmd_simulate(sim_opt);
        }
        emit(rec, format, out_path);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const scrubrel::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const scrubrel::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
