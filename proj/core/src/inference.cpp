#include "genecop/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "genecop/numdiff.hpp"

namespace genecop {

namespace {

constexpr double kRcondFloor = 1e-12;

ParamLayout make_layout(const ModelSpec& spec, const LikelihoodData& data,
                        LikelihoodScope scope, bool restrict_gamma) {
  validate_model_spec(spec);
  if (data.b_gamma() != spec.gef_basis.n_basis)
    throw DomainError(
        "design column count does not match the effect basis size");
  ParamLayout layout;
  layout.copula = spec.copula;
  layout.scope = scope;
  layout.p = static_cast<int>(data.p());
  layout.b_gamma = static_cast<int>(data.b_gamma());
  layout.gamma_fixed_zero = restrict_gamma;
  return layout;
}

// Moment-based starting values: exponential-hazard scale per margin with a
// light event-count smoother so all-censored data still lands somewhere
// feasible, unit shapes, zero regression coefficients.
ParameterVector crude_start(const ParamLayout& layout,
                            const LikelihoodData& data) {
  auto exp_rate = [](const Eigen::VectorXd& y,
                     const std::vector<std::uint8_t>& d) {
    double events = 0.0;
    for (std::uint8_t di : d) events += di;
    const double exposure = std::max(y.sum(), 1e-12);
    return (events + 0.5) / exposure;
  };
  ParameterVector params;
  params.log_lambda1 = std::log(exp_rate(data.y1, data.d1));
  params.log_k1 = 0.0;
  if (layout.scope == LikelihoodScope::Bivariate) {
    params.log_lambda2 = std::log(exp_rate(data.y2, data.d2));
    params.log_k2 = 0.0;
  }
  params.beta = Eigen::VectorXd::Zero(layout.p);
  params.gamma = Eigen::VectorXd::Zero(layout.b_gamma);
  if (layout.has_dep()) params.dep = 0.0;
  return params;
}

// Empirical Kendall tau over pairs where both events were observed; used
// only to seed the dependence parameter.
double dependence_start(CopulaKind kind, const LikelihoodData& data) {
  std::vector<double> t1, t2;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (data.d1[static_cast<std::size_t>(i)] &&
        data.d2[static_cast<std::size_t>(i)]) {
      t1.push_back(data.y1[i]);
      t2.push_back(data.y2[i]);
    }
  }
  double tau = 0.2;
  if (t1.size() >= 30) {
    try {
      tau = std::clamp(kendall_tau(t1, t2), 0.02, 0.93);
    } catch (const DomainError&) {
      tau = 0.2;
    }
  }
  const double eta = tau_to_eta(kind, tau);
  return kind == CopulaKind::Clayton ? std::log(eta) : std::log(eta - 1.0);
}

FitResult run_fit(const LoglikFn& fn, const Eigen::VectorXd& start_free,
                  const OptimizerConfig& opt) {
  const ParamLayout& layout = fn.layout();
  const MaximizeResult max = maximize(
      [&fn](const Eigen::VectorXd& free) { return fn.eval_free(free); },
      start_free, opt);

  FitResult fit;
  const Eigen::VectorXd full = layout.full_from_free(max.x);
  fit.params = layout.unpack(full);
  fit.loglik = max.value;
  fit.converged = max.converged;
  fit.n_iter = max.n_iter;
  fit.grad_norm = max.grad_norm;

  // Score and observed information over the full layout (gamma included),
  // regardless of which coordinates were free during optimization.
  ScalarFn f_full = [&fn](const Eigen::VectorXd& x) { return fn(x); };
  fit.score = numeric_gradient(f_full, full, opt.base_step);
  fit.observed_info = -numeric_hessian(f_full, full, opt.base_step);
  return fit;
}

struct EigenDecomp {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  bool singular = false;
};

EigenDecomp analyze_spd(const Eigen::MatrixXd& m) {
  EigenDecomp out;
  out.solver.compute(m);
  const auto& ev = out.solver.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  out.singular = !(hi > 0.0) || lo <= 0.0 || lo / hi < kRcondFloor;
  return out;
}

Eigen::MatrixXd spd_inverse(const EigenDecomp& d) {
  return d.solver.eigenvectors() *
         d.solver.eigenvalues().cwiseInverse().asDiagonal() *
         d.solver.eigenvectors().transpose();
}

}  // namespace

FitResult fit_mle(const ModelSpec& spec, const LikelihoodData& data,
                  LikelihoodScope scope, const FitOptions& options) {
  const ParamLayout layout =
      make_layout(spec, data, scope, options.restrict_gamma);
  const LoglikFn fn(data, layout);

  Eigen::VectorXd start;
  std::string note;
  if (options.init) {
    start = layout.free_from_full(layout.pack(*options.init));
    note = "warm start";
  } else if (!layout.has_dep()) {
    start = layout.free_from_full(layout.pack(crude_start(layout, data)));
    note = "moment start";
  } else {
    // Stage 1: margins and covariates under a working independence model.
    ParamLayout ind_layout = layout;
    ind_layout.copula = CopulaKind::Independence;
    ind_layout.gamma_fixed_zero = true;
    const LoglikFn ind_fn(data, ind_layout);
    ParameterVector crude = crude_start(ind_layout, data);
    OptimizerConfig stage_opt = options.opt;
    stage_opt.max_iter = std::min(options.opt.max_iter, 200);
    const MaximizeResult stage = maximize(
        [&ind_fn](const Eigen::VectorXd& free) {
          return ind_fn.eval_free(free);
        },
        ind_layout.free_from_full(ind_layout.pack(crude)), stage_opt);
    ParameterVector staged =
        ind_layout.unpack(ind_layout.full_from_free(stage.x));
    // Stage 2: seed the dependence from the double-event Kendall tau.
    staged.dep = dependence_start(layout.copula, data);
    staged.gamma = Eigen::VectorXd::Zero(layout.b_gamma);
    start = layout.free_from_full(layout.pack(staged));
    note = "staged start";
  }

  FitResult fit = run_fit(fn, start, options.opt);
  fit.note = note;
  return fit;
}

TestResult score_test_at(const FitResult& null_fit) {
  if (!null_fit.converged)
    throw ConvergenceError("score test: null fit did not converge");
  const int b = static_cast<int>(null_fit.params.gamma.size());
  const int full = static_cast<int>(null_fit.score.size());
  if (b < 1 || full <= b)
    throw DomainError("score test: degenerate parameter partition");
  const int r = full - b;

  TestResult out;
  out.kind = TestKind::Score;
  out.df = b;

  const Eigen::VectorXd u1 = null_fit.score.tail(b);
  const Eigen::MatrixXd& j = null_fit.observed_info;
  const Eigen::MatrixXd j_gg = j.bottomRightCorner(b, b);
  const Eigen::MatrixXd j_gr = j.bottomLeftCorner(b, r);
  const Eigen::MatrixXd j_rr = j.topLeftCorner(r, r);

  const EigenDecomp rr = analyze_spd(j_rr);
  if (rr.singular) {
    out.singular = true;
    out.note = "singular nuisance information";
    return out;
  }
  const Eigen::MatrixXd schur =
      j_gg - j_gr * spd_inverse(rr) * j_gr.transpose();
  const EigenDecomp ss = analyze_spd(schur);
  if (ss.singular) {
    out.singular = true;
    out.note = "singular effect-block information";
    return out;
  }

  const double q = u1.dot(spd_inverse(ss) * u1);
  out.statistic = std::max(q, 0.0);
  out.p_value = chisq_sf(out.statistic, out.df);
  return out;
}

TestResult lrt_pair(const FitResult& null_fit, const FitResult& alt_fit) {
  if (!null_fit.converged || !alt_fit.converged)
    throw ConvergenceError("likelihood ratio: a fit did not converge");
  const int b = static_cast<int>(alt_fit.params.gamma.size());
  if (b < 1) throw DomainError("likelihood ratio: no tested block");

  double q = 2.0 * (alt_fit.loglik - null_fit.loglik);
  if (q < -1e-6)
    throw ConvergenceError(
        "likelihood ratio: alternative fit fell below the null");
  q = std::max(q, 0.0);

  TestResult out;
  out.kind = TestKind::Lrt;
  out.df = b;
  out.statistic = q;
  out.p_value = chisq_sf(q, b);
  return out;
}

TestResult score_test(const ModelSpec& spec, const LikelihoodData& data,
                      LikelihoodScope scope, const OptimizerConfig& opt) {
  FitOptions options;
  options.opt = opt;
  options.restrict_gamma = true;
  return score_test_at(fit_mle(spec, data, scope, options));
}

TestResult lrt(const ModelSpec& spec, const LikelihoodData& data,
               LikelihoodScope scope, const OptimizerConfig& opt) {
  FitOptions null_options;
  null_options.opt = opt;
  null_options.restrict_gamma = true;
  const FitResult null_fit = fit_mle(spec, data, scope, null_options);
  if (!null_fit.converged)
    throw ConvergenceError("likelihood ratio: null fit did not converge");

  FitOptions alt_options;
  alt_options.opt = opt;
  alt_options.init = null_fit.params;
  const FitResult alt_fit = fit_mle(spec, data, scope, alt_options);
  return lrt_pair(null_fit, alt_fit);
}

}  // namespace genecop
