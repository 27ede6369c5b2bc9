#pragma once

#include <optional>

#include "genecop/likelihood.hpp"
#include "genecop/optimizer.hpp"
#include "genecop/stats.hpp"

namespace genecop {

struct FitOptions {
  OptimizerConfig opt;
  /// Fit the null model: the gamma block is pinned at zero (it still appears
  /// in the reported score and observed information).
  bool restrict_gamma = false;
  /// Optional warm start; when absent, a staged default is used (crude
  /// moment start, an Independence pre-fit of margins and covariates, and a
  /// dependence start from the empirical Kendall tau of double-event pairs).
  std::optional<ParameterVector> init;
};

/// Maximum-likelihood fit.  `FitResult.score` and `.observed_info` are the
/// numeric gradient and negative numeric Hessian of the log-likelihood over
/// the FULL packed layout (gamma block last), evaluated at the optimum, so
/// a restricted fit carries everything the score test needs.  Throws
/// ConvergenceError only if no feasible starting point can be found;
/// non-convergence within the iteration budget is reported through
/// `FitResult.converged`.
FitResult fit_mle(const ModelSpec& spec, const LikelihoodData& data,
                  LikelihoodScope scope = LikelihoodScope::Bivariate,
                  const FitOptions& options = {});

/// Generalized score statistic from a converged null fit: with U the score
/// and J the observed information partitioned so the gamma block is last,
/// Q = U1' (J11 - J12 J22^{-1} J21)^{-1} U1, referred to chi-square with
/// df = dim(gamma).  A numerically singular information (reciprocal
/// condition number below 1e-12 in either J22 or the Schur complement)
/// yields statistic 0, p-value 1 and `singular = true` instead of an error.
/// Throws ConvergenceError if the supplied fit did not converge.
TestResult score_test_at(const FitResult& null_fit);

/// Likelihood-ratio statistic from a converged null/alternative pair:
/// Q = 2 [loglik(alt) - loglik(null)], clamped to zero when it lands within
/// numerical noise below it (Q < -1e-6 throws ConvergenceError, since the
/// alternative can never be genuinely worse).
TestResult lrt_pair(const FitResult& null_fit, const FitResult& alt_fit);

/// One-call conveniences: fit the null (and for the LRT the alternative,
/// warm-started from the null) and form the test.
TestResult score_test(const ModelSpec& spec, const LikelihoodData& data,
                      LikelihoodScope scope = LikelihoodScope::Bivariate,
                      const OptimizerConfig& opt = {});
TestResult lrt(const ModelSpec& spec, const LikelihoodData& data,
               LikelihoodScope scope = LikelihoodScope::Bivariate,
               const OptimizerConfig& opt = {});

}  // namespace genecop
