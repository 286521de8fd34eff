#include "fracsde/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "fracsde/core.hpp"
#include "kernels_detail.hpp"

namespace fracsde::kernels {

namespace detail {

void powlaw_scalar(const double* y, std::size_t n, std::size_t dim, double h,
                   double alpha, double* out) {
    for (std::size_t c = 0; c < dim; ++c) out[c] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(n - j) * h;
        const double w = std::exp(-alpha * std::log(t));
        for (std::size_t c = 0; c < dim; ++c) out[c] += w * y[j * dim + c];
    }
}

void decay_update_scalar(double* accum, const double* decay, const double* push,
                         const double* x, std::size_t terms, std::size_t dim) {
    for (std::size_t j = 0; j < terms; ++j)
        for (std::size_t c = 0; c < dim; ++c)
            accum[j * dim + c] = decay[j] * accum[j * dim + c] + push[j] * x[c];
}

void term_sum_scalar(const double* accum, const double* w, std::size_t terms,
                     std::size_t dim, double* out) {
    for (std::size_t c = 0; c < dim; ++c) out[c] = 0.0;
    for (std::size_t j = 0; j < terms; ++j)
        for (std::size_t c = 0; c < dim; ++c) out[c] += w[j] * accum[j * dim + c];
}

const Vtable scalar_vtable{powlaw_scalar, decay_update_scalar, term_sum_scalar};

}  // namespace detail

namespace {

bool avx2_supported() {
#if defined(FRACSDE_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const detail::Vtable* vtable_for(Backend backend) {
    switch (backend) {
        case Backend::scalar: return &detail::scalar_vtable;
        case Backend::avx2:
#if defined(FRACSDE_HAVE_AVX2_TU)
            return &detail::avx2_vtable;
#else
            break;
#endif
    }
    return nullptr;
}

struct Dispatch {
    const detail::Vtable* table;
    Backend backend;
};

Dispatch detect() {
    if (const char* env = std::getenv("FRACSDE_KERNEL")) {
        const std::string value(env);
        Backend requested;
        if (value == "scalar") requested = Backend::scalar;
        else if (value == "avx2") requested = Backend::avx2;
        else
            throw Error(Errc::bad_config,
                        "FRACSDE_KERNEL must be 'scalar' or 'avx2', got '" + value + "'");
        if (requested == Backend::avx2 && !avx2_supported())
            throw Error(Errc::bad_config, "FRACSDE_KERNEL=avx2 but this CPU lacks AVX2+FMA");
        return {vtable_for(requested), requested};
    }
    if (avx2_supported()) return {vtable_for(Backend::avx2), Backend::avx2};
    return {&detail::scalar_vtable, Backend::scalar};
}

std::atomic<const detail::Vtable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const detail::Vtable* table() {
    const detail::Vtable* t = g_table.load(std::memory_order_acquire);
    if (t) return t;
    const Dispatch d = detect();
    g_backend.store(d.backend, std::memory_order_relaxed);
    g_table.store(d.table, std::memory_order_release);
    return d.table;
}

}  // namespace

Backend active_backend() {
    table();
    return g_backend.load(std::memory_order_relaxed);
}

const char* backend_name(Backend backend) {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_available(Backend backend) {
    return backend == Backend::scalar || avx2_supported();
}

void force_backend(Backend backend) {
    const detail::Vtable* t = vtable_for(backend);
    if (!t || !backend_available(backend))
        throw Error(Errc::bad_config,
                    std::string("kernel backend unavailable: ") + backend_name(backend));
    g_backend.store(backend, std::memory_order_relaxed);
    g_table.store(t, std::memory_order_release);
}

void powlaw_weighted_sum(const double* y, std::size_t n, std::size_t dim,
                         double h, double alpha, double* out) {
    table()->powlaw(y, n, dim, h, alpha, out);
}

void exp_decay_update(double* accum, const double* decay, const double* push,
                      const double* x, std::size_t terms, std::size_t dim) {
    table()->decay_update(accum, decay, push, x, terms, dim);
}

void weighted_term_sum(const double* accum, const double* w, std::size_t terms,
                       std::size_t dim, double* out) {
    table()->term_sum(accum, w, terms, dim, out);
}

}  // namespace fracsde::kernels
