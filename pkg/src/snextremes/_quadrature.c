/* Composite 16-point Gauss-Legendre sums for the scaled Owen T integrand.
 *
 * On x86-64 glibc the inner loop is vectorised through libmvec, with an
 * AVX2 clone picked at load time and a baseline SSE2 version otherwise.
 */
#include <math.h>

#include "_quadrature.h"

#define NG 16

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__) && defined(__GLIBC__)
#define SN_VECTOR_MATH 1
__attribute__((simd("notinbranch"))) double tan(double);
__attribute__((simd("notinbranch"))) double exp(double);
#define SN_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define SN_CLONES
#endif

#ifdef SN_VECTOR_MATH
#pragma GCC push_options
#pragma GCC optimize("O3", "no-math-errno", "fast-math")
#endif

SN_CLONES
void owen_panel_sums(const double *h, const double *hi, double *out, long m,
                     int panels, const double *nodes, const double *weights)
{
    for (long i = 0; i < m; i++) {
        double width = hi[i] / panels;
        double hh = h[i] * h[i];
        double acc = 0.0;
        for (int j = 0; j < panels; j++) {
            double left = j * width, buf[NG], s = 0.0;
#pragma omp simd
            for (int q = 0; q < NG; q++) {
                double t = tan(left + 0.5 * width * (nodes[q] + 1.0));
                buf[q] = weights[q] * exp(-0.5 * hh * t * t);
            }
            for (int q = 0; q < NG; q++)
                s += buf[q];
            acc += s;
        }
        out[i] = 0.5 * width * acc;
    }
}

#ifdef SN_VECTOR_MATH
#pragma GCC pop_options
#endif
