// Dense complex linear algebra for few-qubit systems: tensor products,
// adjoints, partial traces, projectors. Dimensions in this project stay
// at or below 2^6, so everything is plain row-major storage and O(n^3)
// loops; no sparse formats, no eigensolvers.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace switchlab {

using cplx = std::complex<double>;

/// Absolute tolerance for algebraic identities (adjoints, completeness, ...).
inline constexpr double kAlgebraicTol = 1e-12;
/// Absolute tolerance for physical predictions (probabilities, inequality values).
inline constexpr double kPhysicalTol = 1e-9;

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_) {
            throw std::invalid_argument("Matrix: entry count does not match shape");
        }
    }

    /// Row-major brace construction: Matrix::from_rows({{1,0},{0,1}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
        Matrix m(rows.size(), rows.begin()->size());
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_) {
                throw std::invalid_argument("Matrix: ragged row list");
            }
            std::size_t c = 0;
            for (const auto& v : row) m.at(r, c++) = v;
            ++r;
        }
        return m;
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    const std::vector<cplx>& entries() const { return a_; }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }

    Matrix& operator*=(cplx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("Matrix multiply: inner dimensions differ");
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a.at(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out.at(i, j) += aik * b.at(k, j);
                }
            }
        }
        return out;
    }

    cplx trace() const {
        if (!is_square()) throw std::invalid_argument("trace: matrix not square");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("Matrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

/// Conjugate transpose.
inline Matrix adjoint(const Matrix& m) {
    Matrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out.at(c, r) = std::conj(m.at(r, c));
        }
    }
    return out;
}

/// Kronecker product with a's indices most significant.
inline Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx av = a.at(ar, ac);
            if (av == cplx{}) continue;
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out.at(ar * b.rows() + br, ac * b.cols() + bc) = av * b.at(br, bc);
                }
            }
        }
    }
    return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).max_abs();
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol = kAlgebraicTol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

/// Ordered list of tensor factors; the first factor is most significant
/// in the row-major index, matching tensor_product.
struct Subsystem {
    std::string label;
    std::size_t dim = 0;
};

class SystemLayout {
public:
    SystemLayout() = default;
    SystemLayout(std::initializer_list<Subsystem> parts) : parts_(parts) {}
    explicit SystemLayout(std::vector<Subsystem> parts) : parts_(std::move(parts)) {}

    std::size_t count() const { return parts_.size(); }
    const Subsystem& part(std::size_t i) const { return parts_.at(i); }

    std::size_t total_dim() const {
        std::size_t d = 1;
        for (const auto& p : parts_) d *= p.dim;
        return d;
    }

private:
    std::vector<Subsystem> parts_;
};

/// Reduced operator on the kept subsystems (indices into the layout, in
/// layout order); the complement is traced out. Trace is preserved.
inline Matrix partial_trace(const Matrix& rho, const SystemLayout& layout,
                            const std::vector<std::size_t>& keep) {
    if (!rho.is_square()) throw std::invalid_argument("partial_trace: rho not square");
    if (layout.total_dim() != rho.rows()) {
        throw std::invalid_argument("partial_trace: layout does not match matrix dimension");
    }
    const std::size_t n = layout.count();
    std::vector<bool> kept(n, false);
    for (std::size_t k : keep) {
        if (k >= n) throw std::invalid_argument("partial_trace: keep index out of range");
        kept[k] = true;
    }

    std::size_t keep_dim = 1, trace_dim = 1;
    for (std::size_t i = 0; i < n; ++i) {
        (kept[i] ? keep_dim : trace_dim) *= layout.part(i).dim;
    }

    // Multi-index [d_0,...,d_{n-1}] -> full flat index, with kept digits taken
    // from `kd` and traced digits from `td` (both mixed-radix, most significant
    // factor first within their own groups).
    auto full_index = [&](std::size_t kd, std::size_t td) {
        std::size_t idx = 0;
        std::size_t krem = kd, trem = td;
        // First compute each group's digits by peeling from the least
        // significant end, then recompose in layout order.
        std::vector<std::size_t> digits(n);
        for (std::size_t i = n; i-- > 0;) {
            const std::size_t d = layout.part(i).dim;
            if (kept[i]) {
                digits[i] = krem % d;
                krem /= d;
            } else {
                digits[i] = trem % d;
                trem /= d;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            idx = idx * layout.part(i).dim + digits[i];
        }
        return idx;
    };

    Matrix out(keep_dim, keep_dim);
    for (std::size_t r = 0; r < keep_dim; ++r) {
        for (std::size_t c = 0; c < keep_dim; ++c) {
            cplx sum = 0.0;
            for (std::size_t t = 0; t < trace_dim; ++t) {
                sum += rho.at(full_index(r, t), full_index(c, t));
            }
            out.at(r, c) = sum;
        }
    }
    return out;
}

/// Rank-1 projector |psi><psi| from a unit column vector.
inline Matrix projector(const Matrix& psi) {
    if (psi.cols() != 1) throw std::invalid_argument("projector: expected a column vector");
    double norm2 = 0.0;
    for (std::size_t r = 0; r < psi.rows(); ++r) norm2 += std::norm(psi.at(r, 0));
    if (std::abs(norm2 - 1.0) > kPhysicalTol) {
        throw std::invalid_argument("projector: input vector is not unit norm");
    }
    return psi * adjoint(psi);
}

inline bool is_hermitian(const Matrix& m, double tol = kAlgebraicTol) {
    return m.is_square() && max_abs_diff(m, adjoint(m)) <= tol;
}

/// Hermitian within tol and unit trace within tol. Positivity is not
/// checked; the states in scope are constructed positive.
inline bool is_density_operator(const Matrix& m, double tol = kAlgebraicTol) {
    return is_hermitian(m, tol) && std::abs(m.trace() - 1.0) <= tol;
}

namespace states {

inline Matrix ket0() { return Matrix(2, 1, {1.0, 0.0}); }
inline Matrix ket1() { return Matrix(2, 1, {0.0, 1.0}); }

inline Matrix ket_plus() {
    const double s = 1.0 / std::numbers::sqrt2;
    return Matrix(2, 1, {s, s});
}

inline Matrix ket_minus() {
    const double s = 1.0 / std::numbers::sqrt2;
    return Matrix(2, 1, {s, -s});
}

inline Matrix ket_plus_i() {
    const double s = 1.0 / std::numbers::sqrt2;
    return Matrix(2, 1, {s, cplx{0.0, s}});
}

inline Matrix ket_minus_i() {
    const double s = 1.0 / std::numbers::sqrt2;
    return Matrix(2, 1, {s, cplx{0.0, -s}});
}

/// +1 eigenvector of cos(phi) Z + sin(phi) X; phi is the Bloch angle from +Z
/// in the Z-X plane.
inline Matrix bloch_zx(double phi) {
    return Matrix(2, 1, {std::cos(phi / 2.0), std::sin(phi / 2.0)});
}

/// Orthogonal complement of bloch_zx(phi) (the -1 eigenvector).
inline Matrix bloch_zx_orth(double phi) {
    return Matrix(2, 1, {-std::sin(phi / 2.0), std::cos(phi / 2.0)});
}

/// (|0...0> + |1...1>)/sqrt(2) on n qubits.
inline Matrix ghz(std::size_t n) {
    Matrix v(std::size_t{1} << n, 1);
    const double s = 1.0 / std::numbers::sqrt2;
    v.at(0, 0) = s;
    v.at((std::size_t{1} << n) - 1, 0) = s;
    return v;
}

inline Matrix bell_phi_plus() { return ghz(2); }

} // namespace states

inline Matrix pauli_x() { return Matrix::from_rows({{0, 1}, {1, 0}}); }
inline Matrix pauli_y() { return Matrix::from_rows({{0, cplx{0, -1}}, {cplx{0, 1}, 0}}); }
inline Matrix pauli_z() { return Matrix::from_rows({{1, 0}, {0, -1}}); }

} // namespace switchlab
