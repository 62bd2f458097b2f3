// frechet-pd: distances, geodesics, Frechet means and the random-field
// concentration experiment for persistence diagrams, over the C API.
#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <functional>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "frechet_pd.h"

namespace fs = std::filesystem;

namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

int exit_code_for(fpd_status status) {
    switch (status) {
        case FPD_OK:
            return 0;
        case FPD_ERR_CAPACITY:
            return 2;
        case FPD_ERR_NONCONVERGED:
            return 3;
        default:
            return 1;
    }
}

void check(fpd_status status) {
    if (status == FPD_OK) return;
    std::fprintf(stderr, "error: %s\n", fpd_last_error());
    std::exit(exit_code_for(status));
}

int format_for(const std::string& format_flag, const std::string& path) {
    if (format_flag == "json") return FPD_FORMAT_JSON;
    if (format_flag == "csv") return FPD_FORMAT_CSV;
    if (path.size() >= 4 && (path.substr(path.size() - 4) == ".csv")) return FPD_FORMAT_CSV;
    return FPD_FORMAT_JSON;
}

fpd_diagram* load_diagram(const std::string& path, const std::string& format_flag) {
    fpd_diagram* diagram = nullptr;
    check(fpd_diagram_read_file(path.c_str(), format_for(format_flag, path), &diagram));
    return diagram;
}

void save_diagram(const fpd_diagram* diagram, const std::string& path,
                  const std::string& format_flag) {
    check(fpd_diagram_write_file(diagram, path.c_str(), format_for(format_flag, path)));
}

std::vector<fpd_diagram*> load_all(const std::vector<std::string>& paths,
                                   const std::string& format_flag) {
    std::vector<fpd_diagram*> diagrams;
    diagrams.reserve(paths.size());
    for (const std::string& path : paths) diagrams.push_back(load_diagram(path, format_flag));
    return diagrams;
}

void free_all(std::vector<fpd_diagram*>& diagrams) {
    for (fpd_diagram* d : diagrams) fpd_diagram_free(d);
    diagrams.clear();
}

std::vector<std::string> list_diagram_files(const std::string& dir,
                                            const std::string& suffix) {
    std::vector<std::string> paths;
    if (!fs::is_directory(dir)) {
        std::fprintf(stderr, "error: not a directory: %s\n", dir.c_str());
        std::exit(1);
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (suffix.empty() || (name.size() >= suffix.size() &&
                               name.compare(name.size() - suffix.size(), suffix.size(),
                                            suffix) == 0))
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
        std::fprintf(stderr, "error: no diagram files in %s\n", dir.c_str());
        std::exit(1);
    }
    return paths;
}

uint64_t default_seed() {
    if (const char* env = std::getenv("FRECHET_PD_SEED")) {
        char* end = nullptr;
        const uint64_t value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return value;
        std::fprintf(stderr, "error: FRECHET_PD_SEED is not an integer: %s\n", env);
        std::exit(1);
    }
    return 1;
}

void parallel_over(int jobs, uint64_t count, const std::function<void(uint64_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    const uint64_t workers = std::min<uint64_t>(static_cast<uint64_t>(jobs), count);
    for (uint64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

// ---- subcommands ---------------------------------------------------------

int run_dist(const std::string& a_path, const std::string& b_path, const std::string& ground,
             const std::string& format_flag) {
    const int ground_id =
        ground == "chebyshev" ? FPD_GROUND_CHEBYSHEV : FPD_GROUND_EUCLIDEAN;
    fpd_diagram* a = load_diagram(a_path, format_flag);
    fpd_diagram* b = load_diagram(b_path, format_flag);
    fpd_pairing* pairing = nullptr;
    check(fpd_optimal_pairing(a, b, ground_id, &pairing));
    const double squared = fpd_pairing_cost(pairing);
    size_t point_matches = 0, diagonal_matches = 0;
    for (size_t i = 0; i < fpd_pairing_num_matches(pairing); ++i) {
        int64_t source = -1, target = -1;
        check(fpd_pairing_match(pairing, i, &source, &target));
        if (source >= 0 && target >= 0)
            ++point_matches;
        else
            ++diagonal_matches;
    }
    std::printf("distance,squared_distance,num_point_matches,num_diagonal_matches\n");
    std::printf("%s,%s,%zu,%zu\n", fmt(std::sqrt(squared)).c_str(), fmt(squared).c_str(),
                point_matches, diagonal_matches);
    fpd_pairing_free(pairing);
    fpd_diagram_free(a);
    fpd_diagram_free(b);
    return 0;
}

int run_geodesic(const std::string& a_path, const std::string& b_path, double t,
                 const std::string& out_path, const std::string& format_flag) {
    fpd_diagram* a = load_diagram(a_path, format_flag);
    fpd_diagram* b = load_diagram(b_path, format_flag);
    fpd_diagram* mid = nullptr;
    check(fpd_geodesic_evaluate(a, b, t, &mid));
    save_diagram(mid, out_path, format_flag);
    fpd_diagram_free(mid);
    fpd_diagram_free(a);
    fpd_diagram_free(b);
    return 0;
}

int run_check_alexandrov(const std::string& a_path, const std::string& b_path,
                         const std::string& c_path, double t,
                         const std::string& format_flag) {
    fpd_diagram* x = load_diagram(a_path, format_flag);
    fpd_diagram* y = load_diagram(b_path, format_flag);
    fpd_diagram* z = load_diagram(c_path, format_flag);
    double lhs = 0.0, rhs = 0.0;
    int holds = 0;
    check(fpd_alexandrov_check(x, y, z, t, &lhs, &rhs, &holds));
    std::printf("lhs,rhs,holds\n");
    std::printf("%s,%s,%d\n", fmt(lhs).c_str(), fmt(rhs).c_str(), holds);
    fpd_diagram_free(x);
    fpd_diagram_free(y);
    fpd_diagram_free(z);
    return 0;
}

int run_mean(const std::vector<std::string>& in_paths, int restarts, uint64_t seed,
             int max_iter, int jobs, const std::string& out_path,
             const std::string& format_flag) {
    std::vector<fpd_diagram*> diagrams = load_all(in_paths, format_flag);
    fpd_mean_search* search = nullptr;
    check(fpd_mean_multi_restart(diagrams.data(), diagrams.size(), restarts, seed, max_iter,
                                 jobs, &search));
    const fpd_mean_result* best = fpd_mean_search_best(search);
    std::printf("F,iterations,restarts_converged,num_distinct_minima,supporting_vector_norm\n");
    std::printf("%s,%d,%d,%zu,%s\n", fmt(fpd_mean_result_value(best)).c_str(),
                fpd_mean_result_iterations(best), fpd_mean_search_restarts_converged(search),
                fpd_mean_search_num_minima(search),
                fmt(fpd_mean_result_support_norm(best)).c_str());
    if (!out_path.empty())
        save_diagram(fpd_mean_result_diagram(best), out_path, format_flag);
    const bool converged = fpd_mean_result_converged(best) != 0;
    fpd_mean_search_free(search);
    free_all(diagrams);
    if (!converged) {
        std::fprintf(stderr, "error: mean search did not converge within --max-iter\n");
        return 3;
    }
    return 0;
}

int run_oracle(const std::vector<std::string>& in_paths, const std::string& out_path,
               const std::string& format_flag) {
    std::vector<fpd_diagram*> diagrams = load_all(in_paths, format_flag);
    fpd_diagram* mean = nullptr;
    double value = 0.0;
    uint64_t num_minima = 0;
    check(fpd_oracle_mean(diagrams.data(), diagrams.size(), &mean, &value, &num_minima));
    std::printf("F,num_local_minima\n");
    std::printf("%s,%" PRIu64 "\n", fmt(value).c_str(), num_minima);
    if (!out_path.empty()) save_diagram(mean, out_path, format_flag);
    fpd_diagram_free(mean);
    free_all(diagrams);
    return 0;
}

int run_lln(const std::string& mixture_dir, const std::string& y_path, uint64_t n,
            double delta, uint64_t trials, uint64_t seed, int jobs,
            const std::string& format_flag) {
    std::vector<fpd_diagram*> atoms =
        load_all(list_diagram_files(mixture_dir, ""), format_flag);
    fpd_diagram* y = load_diagram(y_path, format_flag);
    fpd_lln_report* report = nullptr;
    check(fpd_lln_run(atoms.data(), atoms.size(), y, n, delta, trials, seed, jobs, &report));
    const double bound = fpd_lln_bound(report);
    std::printf("trial,d_squared,bound,within_bound\n");
    for (size_t t = 0; t < fpd_lln_num_trials(report); ++t) {
        double d_squared = 0.0;
        int within = 0;
        check(fpd_lln_trial(report, t, &d_squared, &within));
        std::printf("%zu,%s,%s,%d\n", t, fmt(d_squared).c_str(), fmt(bound).c_str(), within);
    }
    // Summary row: mean d^2, the bound, and the coverage fraction.
    std::printf("summary,%s,%s,%s\n", fmt(fpd_lln_mean_d_squared(report)).c_str(),
                fmt(bound).c_str(), fmt(fpd_lln_coverage(report)).c_str());
    if (fpd_lln_certificate_failures(report) > 0)
        std::fprintf(stderr, "warning: %" PRIu64 " trials failed the local-minimum certificate\n",
                     fpd_lln_certificate_failures(report));
    fpd_lln_report_free(report);
    fpd_diagram_free(y);
    free_all(atoms);
    return 0;
}

int run_simulate(int grid, double alpha, double jitter, uint64_t fields, uint64_t seed,
                 int jobs, double prune_eps, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) {
        std::fprintf(stderr, "error: cannot create output directory %s\n", out_dir.c_str());
        return 1;
    }
    fpd_field_model* model = nullptr;
    check(fpd_field_model_create(grid, alpha, jitter, seed, &model));
    std::atomic<int> failure{0};
    parallel_over(jobs, fields, [&](uint64_t f) {
        for (int dim = 0; dim <= 1; ++dim) {
            fpd_diagram* diagram = nullptr;
            const fpd_status status = fpd_field_model_diagram(model, f, dim, &diagram);
            if (status != FPD_OK) {
                failure.store(exit_code_for(status));
                std::fprintf(stderr, "error: %s\n", fpd_last_error());
                return;
            }
            if (prune_eps > 0.0) {
                fpd_diagram* pruned = nullptr;
                if (fpd_diagram_prune(diagram, prune_eps, &pruned) != FPD_OK) {
                    failure.store(1);
                    std::fprintf(stderr, "error: %s\n", fpd_last_error());
                    fpd_diagram_free(diagram);
                    return;
                }
                fpd_diagram_free(diagram);
                diagram = pruned;
            }
            char name[64];
            std::snprintf(name, sizeof(name), "field%05" PRIu64 "_dim%d.json", f, dim);
            const std::string path = (fs::path(out_dir) / name).string();
            if (fpd_diagram_write_file(diagram, path.c_str(), FPD_FORMAT_JSON) != FPD_OK) {
                failure.store(1);
                std::fprintf(stderr, "error: %s\n", fpd_last_error());
            }
            fpd_diagram_free(diagram);
        }
    });
    fpd_field_model_free(model);
    if (failure.load() != 0) return failure.load();
    std::printf("fields,grid,dimensions\n%" PRIu64 ",%d,2\n", fields, grid);
    return 0;
}

int run_concentrate(const std::string& in_dir, const std::string& sizes_flag,
                    uint64_t groups, int dim, uint64_t seed, int jobs, double prune_eps,
                    const std::string& out_path, const std::string& format_flag) {
    std::vector<uint64_t> sizes;
    {
        std::string token;
        for (char c : sizes_flag + ",") {
            if (c == ',') {
                if (!token.empty()) sizes.push_back(std::strtoull(token.c_str(), nullptr, 10));
                token.clear();
            } else {
                token += c;
            }
        }
    }
    if (sizes.empty()) {
        std::fprintf(stderr, "error: --sizes must list at least one sample size\n");
        return 1;
    }
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_dim%d.%s", dim,
                  format_flag == "csv" ? "csv" : "json");
    std::vector<fpd_diagram*> diagrams =
        load_all(list_diagram_files(in_dir, suffix), format_flag);
    fpd_concentration* report = nullptr;
    check(fpd_concentration_run(diagrams.data(), diagrams.size(), sizes.data(), sizes.size(),
                                groups, seed, jobs, prune_eps, &report));

    std::string csv = "sample_size,variance\n";
    for (size_t si = 0; si < sizes.size(); ++si) {
        double variance = 0.0;
        check(fpd_concentration_variance(report, si, &variance));
        csv += std::to_string(sizes[si]) + "," + fmt(variance) + "\n";
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 1;
    }
    out << csv;
    out.close();
    std::fputs(csv.c_str(), stdout);

    // Group mean diagrams for plotting, next to the report.
    const fs::path base = fs::path(out_path).parent_path();
    for (size_t si = 0; si < sizes.size(); ++si) {
        for (uint64_t gi = 0; gi < groups; ++gi) {
            const fpd_diagram* mean = fpd_concentration_group_mean(report, si, gi);
            if (mean == nullptr) break;
            char name[96];
            std::snprintf(name, sizeof(name), "mean_dim%d_s%" PRIu64 "_g%" PRIu64 ".json", dim,
                          sizes[si], gi);
            save_diagram(mean, (base / name).string(), "json");
        }
    }
    fpd_concentration_free(report);
    free_all(diagrams);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frechet means, Wasserstein geometry and random-field experiments for "
                 "persistence diagrams"};
    app.set_version_flag("--version", fpd_version());
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string a_path, b_path, c_path, y_path, out_path, mixture_dir, in_dir, sizes_flag;
    std::vector<std::string> in_paths;
    std::string ground = "euclidean";
    std::string format_flag = "auto";
    double t = 0.5, delta = 0.1, alpha = 100.0, jitter = 1e-10, prune_eps = 0.05;
    int restarts = 1, max_iter = 1000, jobs = 1, grid = 32, dim = 0;
    uint64_t n = 0, trials = 0, fields = 0, groups = 10;
    uint64_t seed = default_seed();

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format_flag, "Diagram file format")
            ->check(CLI::IsMember({"auto", "json", "csv"}));
    };

    CLI::App* dist = app.add_subcommand("dist", "L2-Wasserstein distance between two diagrams");
    dist->add_option("--a", a_path)->required();
    dist->add_option("--b", b_path)->required();
    dist->add_option("--ground", ground)->check(CLI::IsMember({"euclidean", "chebyshev"}));
    add_format(dist);

    CLI::App* geo = app.add_subcommand("geodesic", "Evaluate the geodesic between two diagrams");
    geo->add_option("--a", a_path)->required();
    geo->add_option("--b", b_path)->required();
    geo->add_option("--t", t)->required();
    geo->add_option("--out", out_path)->required();
    add_format(geo);

    CLI::App* alex = app.add_subcommand("check-alexandrov",
                                        "Non-negative curvature comparison for a triple");
    alex->add_option("--a", a_path)->required();
    alex->add_option("--b", b_path)->required();
    alex->add_option("--c", c_path)->required();
    alex->add_option("--t", t)->required();
    add_format(alex);

    CLI::App* mean = app.add_subcommand("mean", "Frechet mean by multi-restart descent");
    mean->add_option("--in", in_paths)->required()->expected(-1);
    mean->add_option("--restarts", restarts);
    mean->add_option("--seed", seed);
    mean->add_option("--max-iter", max_iter);
    mean->add_option("--jobs", jobs);
    mean->add_option("--out", out_path);
    add_format(mean);

    CLI::App* oracle = app.add_subcommand("oracle", "Brute-force global Frechet mean");
    oracle->add_option("--in", in_paths)->required()->expected(-1);
    oracle->add_option("--out", out_path);
    add_format(oracle);

    CLI::App* lln = app.add_subcommand("lln", "Concentration-bound Monte Carlo experiment");
    lln->add_option("--mixture", mixture_dir)->required();
    lln->add_option("--y", y_path)->required();
    lln->add_option("--n", n)->required();
    lln->add_option("--delta", delta)->required();
    lln->add_option("--trials", trials)->required();
    lln->add_option("--seed", seed);
    lln->add_option("--jobs", jobs);
    add_format(lln);

    CLI::App* simulate = app.add_subcommand("simulate",
                                            "Draw Gaussian random fields and persist diagrams");
    simulate->add_option("--grid", grid);
    simulate->add_option("--alpha", alpha);
    simulate->add_option("--jitter", jitter);
    simulate->add_option("--prune", prune_eps,
                         "Drop points with persistence below this floor (0 disables)");
    simulate->add_option("--fields", fields)->required();
    simulate->add_option("--seed", seed);
    simulate->add_option("--jobs", jobs);
    simulate->add_option("--out-dir", out_path)->required();

    CLI::App* concentrate = app.add_subcommand("concentrate",
                                               "Variance of sample Frechet means by size");
    concentrate->add_option("--in-dir", in_dir)->required();
    concentrate->add_option("--sizes", sizes_flag)->required();
    concentrate->add_option("--groups", groups);
    concentrate->add_option("--dim", dim)->check(CLI::IsMember({0, 1}));
    concentrate->add_option("--seed", seed);
    concentrate->add_option("--jobs", jobs);
    concentrate->add_option("--prune", prune_eps,
                            "Persistence floor applied to the group means (0 disables)");
    concentrate->add_option("--out", out_path)->required();
    add_format(concentrate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (dist->parsed()) return run_dist(a_path, b_path, ground, format_flag);
    if (geo->parsed()) return run_geodesic(a_path, b_path, t, out_path, format_flag);
    if (alex->parsed()) return run_check_alexandrov(a_path, b_path, c_path, t, format_flag);
    if (mean->parsed())
        return run_mean(in_paths, restarts, seed, max_iter, jobs, out_path, format_flag);
    if (oracle->parsed()) return run_oracle(in_paths, out_path, format_flag);
    if (lln->parsed())
        return run_lln(mixture_dir, y_path, n, delta, trials, seed, jobs, format_flag);
    if (simulate->parsed())
        return run_simulate(grid, alpha, jitter, fields, seed, jobs, prune_eps, out_path);
    if (concentrate->parsed())
        return run_concentrate(in_dir, sizes_flag, groups, dim, seed, jobs, prune_eps, out_path,
                               format_flag);
    return 1;
}
