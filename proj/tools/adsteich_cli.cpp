// Batch experiment runner: each subcommand dispatches one experiment kind,
// reading a spec file (or the shipped default), and writes rows.csv plus
// envelope.txt into --out. Exit codes: 0 success, 2 validation failure,
// 3 solver non-convergence (results are still written).

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "adsteich/experiment.hpp"

namespace {

struct Common {
    std::string spec_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

int run_kind(ats::xp::Kind kind, const Common& c) {
    ats::xp::ExperimentSpec spec;
    try {
        spec = c.spec_path.empty()
                   ? ats::xp::ExperimentSpec::parse(ats::xp::default_spec_text(kind))
                   : ats::xp::ExperimentSpec::load(c.spec_path);
        if (spec.kind != kind)
            throw ats::validation_error("kind", "spec file is for '" +
                                                    ats::xp::kind_name(spec.kind) +
                                                    "' but the subcommand asked for '" +
                                                    ats::xp::kind_name(kind) + "'");
        if (c.seed_set) spec.seed = c.seed;
        spec.validate();
    } catch (const ats::validation_error& e) {
        std::fprintf(stderr, "spec validation failed: %s\n", e.what());
        return 2;
    }

    try {
        const ats::xp::ResultEnvelope env = ats::xp::run(spec, c.threads);
        ats::xp::write_outputs(env, c.out_dir);
        std::printf("%s: %zu rows -> %s (wall %.2fs)\n", ats::xp::kind_name(kind).c_str(),
                    env.rows.size(), c.out_dir.c_str(), env.wall_seconds);
        if (!env.all_converged) {
            std::fprintf(stderr, "warning: some rows did not converge\n");
            return 3;
        }
        return 0;
    } catch (const ats::validation_error& e) {
        std::fprintf(stderr, "spec validation failed: %s\n", e.what());
        return 2;
    } catch (const ats::convergence_error& e) {
        std::fprintf(stderr, "solver failed: %s (best residual %.3g)\n", e.what(),
                     e.best_residual);
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical earthquakes, the Mess correspondence and AdS2 "
                 "convex-core scans"};
    app.require_subcommand(1);

    Common c;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", c.spec_path, "experiment spec file (default: shipped spec)");
        sub->add_option("--out", c.out_dir, "output directory");
        sub->add_option("--seed", c.seed, "override the spec seed")
            ->each([&](const std::string&) { c.seed_set = true; });
        sub->add_option("--threads", c.threads, "multistart parallelism");
    };

    using ats::xp::Kind;
    const std::pair<const char*, Kind> kinds[] = {
        {"forward", Kind::Forward},
        {"prescribe", Kind::Prescribe},
        {"prop2-scan", Kind::Prop2Scan},
        {"prop4-scan", Kind::Prop4Scan},
        {"prop5-scan", Kind::Prop5Scan},
        {"properness-probe", Kind::PropernessProbe},
        {"sublemma-sweep", Kind::SublemmaSweep},
    };
    for (const auto& [name, kind] : kinds) {
        CLI::App* sub = app.add_subcommand(name, ats::xp::kind_name(kind));
        add_common(sub);
        const Kind k = kind;
        sub->callback([&, k] { std::exit(run_kind(k, c)); });
    }

    CLI11_PARSE(app, argc, argv);
    return 0;
}
