#pragma once

#include <complex>
#include <vector>

namespace noon {

using complexd = std::complex<double>;

// Plain dense Hermitian matrix. Used by the brute-force oracles (partial
// transpose, eigensolver, trace oracles); never on a hot path.
class DenseHermitian {
public:
    DenseHermitian() = default;
    explicit DenseHermitian(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    int dim() const { return dim_; }

    complexd& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const complexd& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i).real();
        return t;
    }

    bool is_hermitian(double tol = 1e-14) const {
        for (int r = 0; r < dim_; ++r)
            for (int c = r; c < dim_; ++c)
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
        return true;
    }

private:
    int dim_ = 0;
    std::vector<complexd> a_;
};

} // namespace noon
