#include "noon/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "noon/errors.hpp"

namespace noon {

DenseHermitian partial_transpose(const DenseHermitian& m, int dim_a, int dim_b) {
    if (dim_a * dim_b != m.dim())
        throw ValidationError("partial_transpose: dimensions do not factor the matrix");
    DenseHermitian out(m.dim());
    for (int i = 0; i < dim_a; ++i)
        for (int k = 0; k < dim_b; ++k)
            for (int j = 0; j < dim_a; ++j)
                for (int l = 0; l < dim_b; ++l)
                    out(i * dim_b + l, j * dim_b + k) = m(i * dim_b + k, j * dim_b + l);
    return out;
}

PtReport min_pt_eigenvalue(const NoisyNoonState& s, double tol) {
    PtReport r;
    for (int i = 1; i <= s.cutoff; ++i) r.coherence_norm2 += std::norm(s.coh[i]);
    r.tau = (s.vac - std::sqrt(s.vac * s.vac + 4.0 * r.coherence_norm2)) / 2.0;
    r.entangled = r.tau < -tol;
    return r;
}

double min_eigenvalue(const DenseHermitian& m, double off_tol, int max_sweeps) {
    const int d = m.dim();
    const int n = 2 * d;
    // Real symmetric embedding [[Re, -Im], [Im, Re]]; eigenvalues double up.
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    auto at = [&](int r, int c) -> double& { return a[static_cast<size_t>(r) * n + c]; };
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            at(r, c) = m(r, c).real();
            at(r + d, c + d) = m(r, c).real();
            at(r, c + d) = -m(r, c).imag();
            at(r + d, c) = m(r, c).imag();
        }

    double scale = 0.0;
    for (int r = 0; r < n; ++r) scale = std::max(scale, std::abs(at(r, r)));
    scale = std::max(scale, 1.0);
    const double threshold = off_tol * scale;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (std::sqrt(2.0 * off) < threshold) {
            double mn = at(0, 0);
            for (int i = 1; i < n; ++i) mn = std::min(mn, at(i, i));
            return mn;
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < threshold / n) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(phi);
                const double sn = std::sin(phi);
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - sn * akq;
                    at(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - sn * aqk;
                    at(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }
    throw NumericalError("min_eigenvalue: Jacobi sweeps exhausted without convergence");
}

} // namespace noon
