#include "lrsd/numerics.hpp"

#include <cmath>

namespace lrsd {

ComplexMatrix hermitian_inv_sqrt(const ComplexMatrix& z, double mu) {
    require_finite(z, "hermitian_inv_sqrt");
    if (!(mu > 0.0)) {
        throw DomainError("hermitian_inv_sqrt: mu must be positive");
    }

    // Working from Z instead of the formed Gram keeps the null-space
    // eigenvalues accurate: singular values carry absolute error on the order
    // of eps * sigma_max, so sigma^2 near zero stays far below mu^2, whereas
    // eigenvalues of Z*Z^H would be off by eps * sigma_max^2.
    const Index m = z.rows();
    Eigen::JacobiSVD<ComplexMatrix> dec(z, Eigen::ComputeFullU);
    RealVector sigma = RealVector::Zero(m);
    sigma.head(dec.singularValues().size()) = dec.singularValues();
    RealVector scale(m);
    for (Index i = 0; i < m; ++i) {
        scale(i) = 1.0 / std::sqrt(sigma(i) * sigma(i) + mu * mu);
    }

    ComplexMatrix p = dec.matrixU() * scale.asDiagonal() * dec.matrixU().adjoint();
    return Complex(0.5, 0.0) * (p + p.adjoint());
}

Svd svd(const ComplexMatrix& m) {
    require_finite(m, "svd");
    Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return Svd{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

StructuredSelector::StructuredSelector(ComplexMatrix source)
    : source_(std::move(source)) {}

ComplexVector StructuredSelector::apply(const ComplexVector& gamma) const {
    const Index m = source_.rows();
    const Index t = source_.cols();
    if (gamma.size() != m) {
        throw DimensionError("StructuredSelector::apply: gamma length mismatch");
    }
    ComplexVector out(m * t);
    for (Index j = 0; j < t; ++j) {
        for (Index i = 0; i < m; ++i) {
            out(j * m + i) = gamma(i) * source_(i, j);
        }
    }
    return out;
}

ComplexVector StructuredSelector::adjoint_apply(const ComplexVector& r) const {
    const Index m = source_.rows();
    const Index t = source_.cols();
    if (r.size() != m * t) {
        throw DimensionError("StructuredSelector::adjoint_apply: r length mismatch");
    }
    ComplexVector out = ComplexVector::Zero(m);
    for (Index j = 0; j < t; ++j) {
        for (Index i = 0; i < m; ++i) {
            out(i) += std::conj(source_(i, j)) * r(j * m + i);
        }
    }
    return out;
}

ComplexMatrix StructuredSelector::dense() const {
    const Index m = source_.rows();
    const Index t = source_.cols();
    ComplexMatrix phi = ComplexMatrix::Zero(m * t, m);
    for (Index j = 0; j < t; ++j) {
        for (Index i = 0; i < m; ++i) {
            phi(j * m + i, i) = source_(i, j);
        }
    }
    return phi;
}

} // namespace lrsd
