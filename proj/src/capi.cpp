#include "frechet_pd.h"

#include <cstring>
#include <string>
#include <vector>

#include "frechet_pd/diagram.hpp"
#include "frechet_pd/diagram_io.hpp"
#include "frechet_pd/errors.hpp"
#include "frechet_pd/field.hpp"
#include "frechet_pd/frechet.hpp"
#include "frechet_pd/geometry.hpp"
#include "frechet_pd/sampling.hpp"

struct fpd_diagram {
    fpd::PersistenceDiagram value;
};
struct fpd_pairing {
    fpd::Pairing value;
};
struct fpd_mean_result {
    fpd::FrechetResult value;
    mutable fpd_diagram mean_view;
};
struct fpd_mean_search {
    fpd_mean_result best;
    std::vector<fpd_diagram> minima;
    int restarts_converged = 0;
};
struct fpd_lln_report {
    fpd::LlnReport value;
};
struct fpd_field_model {
    fpd::FieldModel value;
};
struct fpd_concentration {
    fpd::ConcentrationReport value;
    std::vector<std::vector<fpd_diagram>> mean_views;
};

namespace {

thread_local std::string g_last_error = "no error";

fpd_status fail(fpd_status status, const char* message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
fpd_status guarded(Fn&& fn) {
    try {
        fn();
        return FPD_OK;
    } catch (const fpd::capacity_error& e) {
        return fail(FPD_ERR_CAPACITY, e.what());
    } catch (const fpd::parse_error& e) {
        return fail(FPD_ERR_PARSE, e.what());
    } catch (const fpd::io_error& e) {
        return fail(FPD_ERR_IO, e.what());
    } catch (const fpd::argument_error& e) {
        return fail(FPD_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(FPD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FPD_ERR_INTERNAL, "unknown error");
    }
}

bool bad_handle(const void* p) { return p == nullptr; }

fpd::Ground ground_from(int ground) {
    if (ground == FPD_GROUND_CHEBYSHEV) return fpd::Ground::chebyshev;
    if (ground != FPD_GROUND_EUCLIDEAN) throw fpd::argument_error("unknown ground norm");
    return fpd::Ground::euclidean;
}

fpd::Format format_from(int format) {
    if (format == FPD_FORMAT_CSV) return fpd::Format::csv;
    if (format != FPD_FORMAT_JSON) throw fpd::argument_error("unknown diagram format");
    return fpd::Format::json;
}

std::vector<fpd::PersistenceDiagram> collect(const fpd_diagram* const* diagrams, size_t m) {
    if (diagrams == nullptr) throw fpd::argument_error("diagram array is null");
    std::vector<fpd::PersistenceDiagram> result;
    result.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        if (diagrams[i] == nullptr) throw fpd::argument_error("diagram handle is null");
        result.push_back(diagrams[i]->value);
    }
    return result;
}

int tristate_to_int(fpd::TriState t) {
    switch (t) {
        case fpd::TriState::no:
            return FPD_NO;
        case fpd::TriState::yes:
            return FPD_YES;
        case fpd::TriState::unknown:
            break;
    }
    return FPD_UNKNOWN;
}

fpd_mean_result make_result(fpd::FrechetResult&& value) {
    fpd_mean_result result{std::move(value), {}};
    result.mean_view.value = result.value.mean;
    return result;
}

}  // namespace

extern "C" {

const char* fpd_version(void) { return "1.0.0"; }

const char* fpd_last_error(void) { return g_last_error.c_str(); }

fpd_status fpd_diagram_create(const double* points, size_t n, fpd_diagram** out) {
    if (bad_handle(out) || (n > 0 && points == nullptr))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        std::vector<fpd::DiagramPoint> pts(n);
        for (size_t i = 0; i < n; ++i) pts[i] = {points[2 * i], points[2 * i + 1]};
        *out = new fpd_diagram{fpd::PersistenceDiagram(std::move(pts))};
    });
}

void fpd_diagram_free(fpd_diagram* diagram) { delete diagram; }

size_t fpd_diagram_size(const fpd_diagram* diagram) {
    return diagram == nullptr ? 0 : diagram->value.size();
}

fpd_status fpd_diagram_points(const fpd_diagram* diagram, double* out) {
    if (bad_handle(diagram) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    size_t i = 0;
    for (const fpd::DiagramPoint& p : diagram->value.points()) {
        out[i++] = p.birth;
        out[i++] = p.death;
    }
    return FPD_OK;
}

fpd_status fpd_diagram_from_string(const char* data, size_t size, int format,
                                   fpd_diagram** out) {
    if (bad_handle(data) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new fpd_diagram{
            fpd::read_diagram(std::string_view(data, size), format_from(format))};
    });
}

fpd_status fpd_diagram_to_string(const fpd_diagram* diagram, int format, char** out) {
    if (bad_handle(diagram) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const std::string text = fpd::write_diagram(diagram->value, format_from(format));
        char* buffer = new char[text.size() + 1];
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        *out = buffer;
    });
}

fpd_status fpd_diagram_read_file(const char* path, int format, fpd_diagram** out) {
    if (bad_handle(path) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new fpd_diagram{fpd::read_diagram_file(path, format_from(format))};
    });
}

fpd_status fpd_diagram_write_file(const fpd_diagram* diagram, const char* path, int format) {
    if (bad_handle(diagram) || bad_handle(path))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded(
        [&] { fpd::write_diagram_file(diagram->value, path, format_from(format)); });
}

void fpd_string_free(char* data) { delete[] data; }

fpd_status fpd_diagram_filter(const fpd_diagram* diagram, double alpha, int keep_upper,
                              fpd_diagram** out) {
    if (bad_handle(diagram) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new fpd_diagram{keep_upper != 0 ? fpd::upper_filter(diagram->value, alpha)
                                               : fpd::lower_filter(diagram->value, alpha)};
    });
}

fpd_status fpd_diagram_prune(const fpd_diagram* diagram, double eps, fpd_diagram** out) {
    if (bad_handle(diagram) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new fpd_diagram{fpd::prune(diagram->value, eps)}; });
}

fpd_status fpd_distance(const fpd_diagram* a, const fpd_diagram* b, int ground,
                        double* distance, double* squared_distance) {
    if (bad_handle(a) || bad_handle(b)) return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const double squared = fpd::squared_distance(a->value, b->value, ground_from(ground));
        if (squared_distance != nullptr) *squared_distance = squared;
        if (distance != nullptr) *distance = std::sqrt(squared);
    });
}

fpd_status fpd_optimal_pairing(const fpd_diagram* a, const fpd_diagram* b, int ground,
                               fpd_pairing** out) {
    if (bad_handle(a) || bad_handle(b) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new fpd_pairing{fpd::optimal_pairing(a->value, b->value, ground_from(ground))};
    });
}

void fpd_pairing_free(fpd_pairing* pairing) { delete pairing; }

size_t fpd_pairing_num_matches(const fpd_pairing* pairing) {
    return pairing == nullptr ? 0 : pairing->value.matches.size();
}

fpd_status fpd_pairing_match(const fpd_pairing* pairing, size_t index, int64_t* source,
                             int64_t* target) {
    if (bad_handle(pairing)) return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    if (index >= pairing->value.matches.size())
        return fail(FPD_ERR_ARGUMENT, "match index out of range");
    const fpd::Match& m = pairing->value.matches[index];
    if (source != nullptr) *source = m.source;
    if (target != nullptr) *target = m.target;
    return FPD_OK;
}

double fpd_pairing_cost(const fpd_pairing* pairing) {
    return pairing == nullptr ? 0.0 : pairing->value.cost;
}

fpd_status fpd_count_optimal_pairings(const fpd_diagram* a, const fpd_diagram* b, int ground,
                                      double tol, uint64_t* count) {
    if (bad_handle(a) || bad_handle(b) || bad_handle(count))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *count = fpd::count_optimal_pairings(a->value, b->value, ground_from(ground), tol);
    });
}

fpd_status fpd_geodesic_evaluate(const fpd_diagram* a, const fpd_diagram* b, double t,
                                 fpd_diagram** out) {
    if (bad_handle(a) || bad_handle(b) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const fpd::Geodesic geodesic(a->value, b->value);
        *out = new fpd_diagram{fpd::evaluate_geodesic(geodesic, t)};
    });
}

fpd_status fpd_alexandrov_check(const fpd_diagram* x, const fpd_diagram* y,
                                const fpd_diagram* z, double t, double* lhs, double* rhs,
                                int* holds) {
    if (bad_handle(x) || bad_handle(y) || bad_handle(z))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const fpd::AlexandrovCheck check =
            fpd::check_alexandrov(x->value, y->value, z->value, t);
        if (lhs != nullptr) *lhs = check.lhs;
        if (rhs != nullptr) *rhs = check.rhs;
        if (holds != nullptr) *holds = check.holds ? 1 : 0;
    });
}

fpd_status fpd_supporting_vector_norm(const fpd_diagram* y,
                                      const fpd_diagram* const* diagrams, size_t m,
                                      double* norm) {
    if (bad_handle(y) || bad_handle(norm))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *norm = fpd::supporting_vector(y->value, collect(diagrams, m)).norm();
    });
}

fpd_status fpd_mean_compute(const fpd_diagram* const* diagrams, size_t m,
                            const fpd_diagram* init, uint64_t seed, int max_iter,
                            fpd_mean_result** out) {
    if (bad_handle(out)) return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        fpd::MeanOptions options;
        options.max_iter = max_iter;
        options.init = init != nullptr ? fpd::MeanInit::given(init->value)
                                       : fpd::MeanInit::random_input(seed);
        *out = new fpd_mean_result(make_result(fpd::compute_mean(collect(diagrams, m), options)));
    });
}

void fpd_mean_result_free(fpd_mean_result* result) { delete result; }

const fpd_diagram* fpd_mean_result_diagram(const fpd_mean_result* result) {
    return result == nullptr ? nullptr : &result->mean_view;
}

double fpd_mean_result_value(const fpd_mean_result* result) {
    return result == nullptr ? 0.0 : result->value.frechet_value;
}

int fpd_mean_result_iterations(const fpd_mean_result* result) {
    return result == nullptr ? 0 : result->value.iterations;
}

int fpd_mean_result_converged(const fpd_mean_result* result) {
    return result != nullptr && result->value.converged ? 1 : 0;
}

size_t fpd_mean_result_trace_size(const fpd_mean_result* result) {
    return result == nullptr ? 0 : result->value.trace.size();
}

fpd_status fpd_mean_result_trace(const fpd_mean_result* result, double* out) {
    if (bad_handle(result) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    std::memcpy(out, result->value.trace.data(), result->value.trace.size() * sizeof(double));
    return FPD_OK;
}

double fpd_mean_result_support_norm(const fpd_mean_result* result) {
    return result == nullptr ? 0.0 : result->value.certificate.supporting_vector_norm;
}

int fpd_mean_result_pairings_unique(const fpd_mean_result* result) {
    return result == nullptr ? FPD_UNKNOWN
                             : tristate_to_int(result->value.certificate.pairings_unique);
}

fpd_status fpd_mean_multi_restart(const fpd_diagram* const* diagrams, size_t m, int restarts,
                                  uint64_t seed, int max_iter, int jobs,
                                  fpd_mean_search** out) {
    if (bad_handle(out)) return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        fpd::MultiRestartResult search =
            fpd::multi_restart_mean(collect(diagrams, m), restarts, seed, max_iter, jobs);
        auto* handle = new fpd_mean_search;
        handle->best = make_result(std::move(search.best));
        handle->restarts_converged = search.restarts_converged;
        handle->minima.reserve(search.minima.size());
        for (fpd::PersistenceDiagram& d : search.minima)
            handle->minima.push_back(fpd_diagram{std::move(d)});
        *out = handle;
    });
}

void fpd_mean_search_free(fpd_mean_search* search) { delete search; }

const fpd_mean_result* fpd_mean_search_best(const fpd_mean_search* search) {
    return search == nullptr ? nullptr : &search->best;
}

size_t fpd_mean_search_num_minima(const fpd_mean_search* search) {
    return search == nullptr ? 0 : search->minima.size();
}

const fpd_diagram* fpd_mean_search_minimum(const fpd_mean_search* search, size_t index) {
    if (search == nullptr || index >= search->minima.size()) return nullptr;
    return &search->minima[index];
}

int fpd_mean_search_restarts_converged(const fpd_mean_search* search) {
    return search == nullptr ? 0 : search->restarts_converged;
}

fpd_status fpd_oracle_mean(const fpd_diagram* const* diagrams, size_t m, fpd_diagram** mean,
                           double* frechet_value, uint64_t* num_local_minima) {
    return guarded([&] {
        fpd::OracleResult result = fpd::oracle_global_mean(collect(diagrams, m));
        if (mean != nullptr) *mean = new fpd_diagram{std::move(result.mean)};
        if (frechet_value != nullptr) *frechet_value = result.frechet_value;
        if (num_local_minima != nullptr) *num_local_minima = result.num_local_minima;
    });
}

fpd_status fpd_lln_run(const fpd_diagram* const* atoms, size_t m, const fpd_diagram* y,
                       uint64_t n, double delta, uint64_t trials, uint64_t seed, int jobs,
                       fpd_lln_report** out) {
    if (bad_handle(y) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        fpd::DiracMixture mixture{collect(atoms, m)};
        *out = new fpd_lln_report{
            fpd::lln_experiment(mixture, y->value, n, delta, trials, seed, jobs)};
    });
}

void fpd_lln_report_free(fpd_lln_report* report) { delete report; }

double fpd_lln_bound(const fpd_lln_report* report) {
    return report == nullptr ? 0.0 : report->value.bound;
}

size_t fpd_lln_num_trials(const fpd_lln_report* report) {
    return report == nullptr ? 0 : report->value.trials.size();
}

fpd_status fpd_lln_trial(const fpd_lln_report* report, size_t index, double* d_squared,
                         int* within_bound) {
    if (bad_handle(report)) return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    if (index >= report->value.trials.size())
        return fail(FPD_ERR_ARGUMENT, "trial index out of range");
    if (d_squared != nullptr) *d_squared = report->value.trials[index].d_squared;
    if (within_bound != nullptr)
        *within_bound = report->value.trials[index].within_bound ? 1 : 0;
    return FPD_OK;
}

double fpd_lln_coverage(const fpd_lln_report* report) {
    return report == nullptr ? 0.0 : report->value.coverage;
}

double fpd_lln_mean_d_squared(const fpd_lln_report* report) {
    return report == nullptr ? 0.0 : report->value.mean_d_squared;
}

double fpd_lln_max_d_squared(const fpd_lln_report* report) {
    return report == nullptr ? 0.0 : report->value.max_d_squared;
}

uint64_t fpd_lln_certificate_failures(const fpd_lln_report* report) {
    return report == nullptr ? 0 : report->value.certificate_failures;
}

fpd_status fpd_field_model_create(int grid_size, double alpha, double jitter, uint64_t seed,
                                  fpd_field_model** out) {
    if (bad_handle(out)) return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const fpd::FieldConfig config{grid_size, alpha, seed, jitter};
        *out = new fpd_field_model{fpd::FieldModel(config)};
    });
}

void fpd_field_model_free(fpd_field_model* model) { delete model; }

fpd_status fpd_field_model_diagram(const fpd_field_model* model, uint64_t field_index,
                                   int dimension, fpd_diagram** out) {
    if (bad_handle(model) || bad_handle(out))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new fpd_diagram{
            fpd::superlevel_persistence(model->value.generate(field_index), dimension)};
    });
}

fpd_status fpd_concentration_run(const fpd_diagram* const* diagrams, size_t count,
                                 const uint64_t* sample_sizes, size_t num_sizes,
                                 uint64_t groups, uint64_t seed, int jobs, double prune_eps,
                                 fpd_concentration** out) {
    if (bad_handle(out) || bad_handle(sample_sizes))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const std::vector<uint64_t> sizes(sample_sizes, sample_sizes + num_sizes);
        auto* handle = new fpd_concentration;
        handle->value = fpd::concentration_from_diagrams(collect(diagrams, count), sizes,
                                                         groups, seed, jobs, prune_eps);
        handle->mean_views.resize(handle->value.rows.size());
        for (size_t si = 0; si < handle->value.rows.size(); ++si)
            for (const fpd::PersistenceDiagram& mean : handle->value.rows[si].group_means)
                handle->mean_views[si].push_back(fpd_diagram{mean});
        *out = handle;
    });
}

void fpd_concentration_free(fpd_concentration* report) { delete report; }

fpd_status fpd_concentration_variance(const fpd_concentration* report, size_t size_index,
                                      double* variance) {
    if (bad_handle(report) || bad_handle(variance))
        return fail(FPD_ERR_ARGUMENT, "null pointer argument");
    if (size_index >= report->value.rows.size())
        return fail(FPD_ERR_ARGUMENT, "size index out of range");
    *variance = report->value.rows[size_index].variance;
    return FPD_OK;
}

const fpd_diagram* fpd_concentration_group_mean(const fpd_concentration* report,
                                                size_t size_index, size_t group_index) {
    if (report == nullptr || size_index >= report->mean_views.size()) return nullptr;
    if (group_index >= report->mean_views[size_index].size()) return nullptr;
    return &report->mean_views[size_index][group_index];
}

}  // extern "C"
