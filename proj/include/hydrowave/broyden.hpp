#pragma once

// "Good" Broyden quasi-Newton iteration: the Jacobian approximation B is
// updated by rank-one corrections and each step solves B s = -F densely.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hydrowave/errors.hpp"

namespace hydrowave {

using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;

struct BroydenOptions {
  double tol = 1e-8;
  int maxIter = 200;
  double fdStep = 1e-7;
  bool backtracking = true;
  int maxHalvings = 8;
  double growthLimit = 10.0;  // backtrack when ||F|| grows by more than this factor
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residualNorm = 0.0;
  std::vector<double> x;
  std::vector<double> history;  // max-norm residual after each iterate, starting with x0
  Eigen::MatrixXd jacobian;     // final Broyden matrix, reusable as a warm start
};

inline double maxNorm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

namespace broyden_detail {
inline Eigen::VectorXd evaluate(const ResidualFn& f, const Eigen::VectorXd& x) {
  const std::vector<double> r = f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  if (static_cast<Eigen::Index>(r.size()) != x.size()) {
    throw Error(ErrorKind::Precondition, "residual length must equal unknown count");
  }
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = r[static_cast<std::size_t>(i)];
  return out;
}

inline bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }
}  // namespace broyden_detail

/// Forward-difference Jacobian with step fdStep * max(1, |x_i|).
inline Eigen::MatrixXd finiteDifferenceJacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& fx, double fdStep) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = fdStep * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const Eigen::VectorXd fp = broyden_detail::evaluate(f, xp);
    if (!broyden_detail::finite(fp)) throw Error(ErrorKind::NumericalBlowup, "non-finite residual in Jacobian column");
    J.col(j) = (fp - fx) / (xp[j] - x[j]);
    xp[j] = x[j];
  }
  return J;
}

/// Solves F(x) = 0 from x0. Exceeding maxIter returns converged = false.
inline SolveReport broydenSolve(const ResidualFn& f, std::span<const double> x0, const BroydenOptions& opt = {},
                                const Eigen::MatrixXd* initialJacobian = nullptr) {
  const Eigen::Index n = static_cast<Eigen::Index>(x0.size());
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = x0[static_cast<std::size_t>(i)];

  SolveReport rep;
  Eigen::VectorXd fx = broyden_detail::evaluate(f, x);
  if (!broyden_detail::finite(fx)) throw Error(ErrorKind::NumericalBlowup, "non-finite residual at initial guess");
  double norm = maxNorm(fx);
  rep.history.push_back(norm);

  auto finish = [&](bool ok, Eigen::MatrixXd B) {
    rep.converged = ok;
    rep.residualNorm = norm;
    rep.x.assign(x.data(), x.data() + n);
    rep.jacobian = std::move(B);
    return rep;
  };
  if (norm <= opt.tol) return finish(true, initialJacobian ? *initialJacobian : Eigen::MatrixXd());

  Eigen::MatrixXd B = (initialJacobian && initialJacobian->rows() == n && initialJacobian->cols() == n)
                          ? *initialJacobian
                          : finiteDifferenceJacobian(f, x, fx, opt.fdStep);

  for (int iter = 1; iter <= opt.maxIter; ++iter) {
    Eigen::VectorXd s = B.partialPivLu().solve(-fx);
    if (!s.allFinite()) {
      // Singular B: fall back to a least-squares step.
      s = B.completeOrthogonalDecomposition().solve(-fx);
      if (!s.allFinite()) throw Error(ErrorKind::Stagnation, "Broyden matrix is singular");
    }
    Eigen::VectorXd xNew = x + s;
    Eigen::VectorXd fNew;
    bool ok = false;
    try {
      fNew = broyden_detail::evaluate(f, xNew);
      ok = broyden_detail::finite(fNew);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericalBlowup && e.kind() != ErrorKind::DegenerateCurve &&
          e.kind() != ErrorKind::SingularCurve) {
        throw;
      }
    }
    if (opt.backtracking) {
      for (int h = 0; h < opt.maxHalvings && (!ok || maxNorm(fNew) > opt.growthLimit * norm); ++h) {
        s *= 0.5;
        xNew = x + s;
        ok = false;
        try {
          fNew = broyden_detail::evaluate(f, xNew);
          ok = broyden_detail::finite(fNew);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NumericalBlowup && e.kind() != ErrorKind::DegenerateCurve &&
              e.kind() != ErrorKind::SingularCurve) {
            throw;
          }
        }
      }
    }
    if (!ok) throw Error(ErrorKind::NumericalBlowup, "residual became non-finite at iteration " + std::to_string(iter));

    // The realized step, which differs from s when x + s rounds.
    s = xNew - x;
    const double ss = s.squaredNorm();
    if (ss == 0.0) throw Error(ErrorKind::Stagnation, "zero Broyden step");
    const Eigen::VectorXd y = fNew - fx;
    B += ((y - B * s) * s.transpose()) / ss;
    x = xNew;
    fx = fNew;
    norm = maxNorm(fx);
    rep.iterations = iter;
    rep.history.push_back(norm);
    if (norm <= opt.tol) return finish(true, std::move(B));
  }
  return finish(false, std::move(B));
}

}  // namespace hydrowave
