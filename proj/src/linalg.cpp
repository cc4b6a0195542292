#include "tmmse/linalg.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

namespace tmmse {

CMat& CMat::operator+=(const CMat& o) {
    if (!same_shape(o)) throw std::invalid_argument("CMat +=: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& o) {
    if (!same_shape(o)) throw std::invalid_argument("CMat -=: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

CMat CMat::identity(std::size_t n) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat operator+(CMat a, const CMat& b) { return a += b; }
CMat operator-(CMat a, const CMat& b) { return a -= b; }

CMat adjoint(const CMat& a) {
    CMat out(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = std::conj(a(i, j));
    return out;
}

CMat matmul(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
    CMat out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cx bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) += a(i, k) * bkj;
        }
    return out;
}

CMat matmul_adj(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("matmul_adj: dimension mismatch");
    CMat out(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) {
            cx acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += std::conj(a(k, i)) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

CVec matvec(const CMat& a, std::span<const cx> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    CVec y(a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const cx xj = x[j];
        for (std::size_t i = 0; i < a.rows(); ++i) y[i] += a(i, j) * xj;
    }
    return y;
}

double frobenius_distance(const CMat& a, const CMat& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("frobenius_distance: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.flat().size(); ++i) s += std::norm(a.flat()[i] - b.flat()[i]);
    return std::sqrt(s);
}

double hermitian_defect(const CMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_defect: not square");
    double d = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
    return d;
}

void add_diagonal(CMat& a, double lambda) {
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) a(i, i) += lambda;
}

double trace_real(const CMat& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i).real();
    return t;
}

cx inner(std::span<const cx> x, std::span<const cx> y) {
    if (x.size() != y.size()) throw std::invalid_argument("inner: length mismatch");
    cx acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

double norm2_sq(std::span<const cx> x) {
    double s = 0.0;
    for (const cx& v : x) s += std::norm(v);
    return s;
}

CVec kron(std::span<const cx> a, std::span<const cx> b) {
    CVec out(a.size() * b.size());
    for (std::size_t ia = 0; ia < a.size(); ++ia)
        for (std::size_t ib = 0; ib < b.size(); ++ib) out[ia * b.size() + ib] = a[ia] * b[ib];
    return out;
}

CholeskyFactor CholeskyFactor::factor(const CMat& a, ProductCounter* pc) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows();

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    const double pivot_floor = 1e3 * DBL_EPSILON * max_diag;

    CholeskyFactor f;
    f.l_ = CMat(n, n);
    CMat& l = f.l_;
    std::uint64_t products = 0;

    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j).real();
        for (std::size_t m = 0; m < j; ++m) diag -= std::norm(l(j, m));
        products += j;

        if (!(diag > pivot_floor) || !std::isfinite(diag)) {
            std::ostringstream msg;
            msg << "cholesky: pivot " << diag << " at index " << j
                << " below threshold " << pivot_floor
                << "; matrix is numerically singular (consider diagonal loading)";
            throw SingularMatrixError(msg.str());
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;

        for (std::size_t i = j + 1; i < n; ++i) {
            cx acc = a(i, j);
            for (std::size_t m = 0; m < j; ++m) acc -= l(i, m) * std::conj(l(j, m));
            l(i, j) = acc / ljj;
        }
        if (n > j + 1) products += (n - j - 1) * (j + 1);
    }
    if (pc) pc->solve += products;
    return f;
}

CVec CholeskyFactor::solve(std::span<const cx> b, ProductCounter* pc) const {
    const std::size_t n = dim();
    if (b.size() != n) throw std::invalid_argument("cholesky solve: rhs length mismatch");
    CVec y(b.begin(), b.end());

    // forward: L y = b
    for (std::size_t i = 0; i < n; ++i) {
        cx acc = y[i];
        for (std::size_t m = 0; m < i; ++m) acc -= l_(i, m) * y[m];
        y[i] = acc / l_(i, i);
    }
    // backward: L^H x = y
    for (std::size_t ii = n; ii-- > 0;) {
        cx acc = y[ii];
        for (std::size_t m = ii + 1; m < n; ++m) acc -= std::conj(l_(m, ii)) * y[m];
        y[ii] = acc / l_(ii, ii);
    }
    if (pc) pc->solve += n * (n + 1);
    return y;
}

CMat CholeskyFactor::solve(const CMat& b, ProductCounter* pc) const {
    if (b.rows() != dim()) throw std::invalid_argument("cholesky solve: rhs rows mismatch");
    CMat out(b.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        CVec x = solve(b.col(j), pc);
        for (std::size_t i = 0; i < b.rows(); ++i) out(i, j) = x[i];
    }
    return out;
}

}  // namespace tmmse
