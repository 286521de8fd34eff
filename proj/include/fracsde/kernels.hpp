#pragma once

#include <cstddef>

namespace fracsde::kernels {

enum class Backend { scalar, avx2 };

/// Backend chosen for this process: auto-detected on first use, or taken
/// from FRACSDE_KERNEL (values "scalar"/"avx2") when set.
Backend active_backend();
const char* backend_name(Backend backend);
bool backend_available(Backend backend);

/// Pin the backend explicitly (testing hook); throws if unavailable.
/// Not safe to call concurrently with running kernels.
void force_backend(Backend backend);

/// out[c] = sum_{j=0}^{n-1} ((n-j) h)^(-alpha) * y[j*dim + c].
/// Power weights computed as exp(-alpha log((n-j) h)); inputs must be
/// finite with h > 0 and n >= 1.
void powlaw_weighted_sum(const double* y, std::size_t n, std::size_t dim,
                         double h, double alpha, double* out);

/// accum[j*dim+c] = decay[j] * accum[j*dim+c] + push[j] * x[c].
void exp_decay_update(double* accum, const double* decay, const double* push,
                      const double* x, std::size_t terms, std::size_t dim);

/// out[c] = sum_j w[j] * accum[j*dim+c].
void weighted_term_sum(const double* accum, const double* w,
                       std::size_t terms, std::size_t dim, double* out);

}  // namespace fracsde::kernels
