#ifndef SGN_RICCATI_HPP_
#define SGN_RICCATI_HPP_

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "sgn/error.hpp"
#include "sgn/model.hpp"

namespace sgn {

/// Smallest admissible Sherman-Morrison denominator 1 + w u^T A^{-1} u.
inline constexpr double kRiccatiDenominatorFloor = 1e-300;

/// Inverse of a matrix A_n = A_0 + sum_k w_k u_k u_k^T, maintained through
/// rank-one Sherman-Morrison (Riccati) updates in O(q^2) per update.
///
/// The stored inverse is re-symmetrized after every update. It stays
/// positive definite as long as A_0 is positive definite and all weights
/// are non-negative.
template <int Dim = Dynamic>
class InverseState {
public:
    using VectorType = Vector<Dim>;
    using MatrixType = Matrix<Dim>;

    InverseState() = default;

    /// Takes A_0^{-1}. Throws ConfigError unless it is symmetric positive definite.
    explicit InverseState(const MatrixType& a0_inv) : inv_(a0_inv) {
        if (a0_inv.rows() != a0_inv.cols() || a0_inv.rows() < 1)
            throw ConfigError("InverseState: initial inverse must be a non-empty square matrix");
        if (!a0_inv.allFinite()) throw ConfigError("InverseState: initial inverse must be finite");
        const double scale = std::max(1.0, a0_inv.cwiseAbs().maxCoeff());
        if ((a0_inv - a0_inv.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ConfigError("InverseState: initial inverse is not symmetric");
        Eigen::LLT<MatrixType> llt(a0_inv);
        if (llt.info() != Eigen::Success) throw ConfigError("InverseState: initial inverse is not positive definite");
        inv_ = 0.5 * (inv_ + inv_.transpose()).eval();
    }

    static InverseState identity(Eigen::Index dim = Dim) {
        return InverseState(MatrixType::Identity(dim, dim));
    }

    /// Restores a state without validation; used by checkpoint loading.
    static InverseState restore(const MatrixType& inv, std::uint64_t updates_applied) {
        InverseState s;
        s.inv_ = inv;
        s.updates_ = updates_applied;
        return s;
    }

    const MatrixType& inv() const noexcept { return inv_; }
    Eigen::Index dim() const noexcept { return inv_.rows(); }
    std::uint64_t updates_applied() const noexcept { return updates_; }

    /// A^{-1} <- (A + w u u^T)^{-1}.
    void update(const VectorType& u, double w) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw NumericalBreakdown(BreakdownKind::non_finite_update, "rank-one weight must be finite and >= 0");
        if (u.size() != dim()) throw ConfigError("InverseState::update: dimension mismatch");
        if (!u.allFinite()) throw NumericalBreakdown(BreakdownKind::non_finite_update, "rank-one vector is not finite");
        ++updates_;
        if (w == 0.0) return;
        const VectorType v = inv_ * u;
        const double denom = 1.0 + w * u.dot(v);
        if (!(denom > kRiccatiDenominatorFloor) || !std::isfinite(denom))
            throw NumericalBreakdown(BreakdownKind::riccati_denominator,
                                     "Sherman-Morrison denominator is not positive");
        inv_.noalias() -= (w / denom) * v * v.transpose();
        inv_ = 0.5 * (inv_ + inv_.transpose()).eval();
        if (!inv_.allFinite())
            throw NumericalBreakdown(BreakdownKind::non_finite_update, "inverse became non-finite");
    }

    /// First adds w_z z z^T, then phi phi^T (the half step and full step).
    void double_update(const VectorType& z, double w_z, const VectorType& phi) {
        update(z, w_z);
        update(phi, 1.0);
    }

    /// Recovers A_n by inverting the maintained inverse.
    MatrixType matrix() const {
        Eigen::LLT<MatrixType> llt(inv_);
        if (llt.info() != Eigen::Success)
            throw NumericalBreakdown(BreakdownKind::non_finite_update, "maintained inverse lost positive definiteness");
        return llt.solve(MatrixType::Identity(dim(), dim()));
    }

    friend std::ostream& operator<<(std::ostream& os, const InverseState& s) {
        write_csv(os, s);
        return os;
    }

    /// Debug dump, one matrix row per line.
    static void write_csv(std::ostream& os, const InverseState& s) {
        const auto old = os.precision(std::numeric_limits<double>::max_digits10);
        for (Eigen::Index i = 0; i < s.dim(); ++i) {
            for (Eigen::Index j = 0; j < s.dim(); ++j) os << (j ? "," : "") << s.inv_(i, j);
            os << '\n';
        }
        os.precision(old);
    }

private:
    MatrixType inv_;
    std::uint64_t updates_ = 0;
};

template <int Dim>
InverseState<Dim> init(const Matrix<Dim>& a0_inv) {
    return InverseState<Dim>(a0_inv);
}

template <int Dim>
InverseState<Dim> rank_one_update(InverseState<Dim> state, const Vector<Dim>& u, double w) {
    state.update(u, w);
    return state;
}

template <int Dim>
InverseState<Dim> double_update(InverseState<Dim> state, const Vector<Dim>& z, double w_z,
                                const Vector<Dim>& phi) {
    state.double_update(z, w_z, phi);
    return state;
}

}  // namespace sgn

#endif  // SGN_RICCATI_HPP_
