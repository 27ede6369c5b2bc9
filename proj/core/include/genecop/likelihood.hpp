#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "genecop/basis.hpp"
#include "genecop/copula.hpp"
#include "genecop/types.hpp"

namespace genecop {

/// Weibull margin under proportional hazards at one observation time.
/// The cumulative hazard is (lambda*t)^k * exp(lp); survival and density
/// follow from it.
struct MarginEval {
  double survival = 1.0;
  double density = 0.0;
  double cum_hazard = 0.0;
};

/// Evaluates one Weibull margin.  Requires lambda > 0, k > 0, t >= 0 and a
/// finite linear predictor.
MarginEval margin_eval(double lambda, double k, double linear_predictor,
                       double t);

/// X_i' beta + M_i' gamma for one subject.
double linear_predictor(const Eigen::VectorXd& covariates,
                        const Eigen::VectorXd& beta,
                        const Eigen::VectorXd& design_row,
                        const Eigen::VectorXd& gamma);

/// Which likelihood is being evaluated: the joint bivariate model, or the
/// first margin alone (the univariate comparator fitted with the same
/// functional design).
enum class LikelihoodScope { Bivariate, Margin1 };

/// Records and design packed into contiguous storage for the likelihood hot
/// path.  Construction validates every record; events at time exactly zero
/// are rejected (no density exists there).
struct LikelihoodData {
  Eigen::VectorXd y1, y2;
  Eigen::VectorXd log_y1, log_y2;
  std::vector<std::uint8_t> d1, d2;
  Eigen::MatrixXd X;  // n x p covariates
  Eigen::MatrixXd M;  // n x b_gamma functional design
  std::vector<std::string> ids;

  static LikelihoodData build(const std::vector<SubjectRecord>& records,
                              const DesignMatrix& design);

  Eigen::Index n() const { return y1.size(); }
  Eigen::Index p() const { return X.cols(); }
  Eigen::Index b_gamma() const { return M.cols(); }
};

/// Flat-vector packing policy for the model parameters.
///
/// Full layout order: [log_lambda1, log_k1, (log_lambda2, log_k2 when
/// bivariate), beta, (dep when the copula has one), gamma].  The gamma block
/// is always last so score-test partitioning can slice the tail.  A layout
/// with `gamma_fixed_zero` exposes a shorter "free" vector that omits gamma
/// (the null-model parameterization).
struct ParamLayout {
  CopulaKind copula = CopulaKind::Independence;
  LikelihoodScope scope = LikelihoodScope::Bivariate;
  int p = 0;
  int b_gamma = 0;
  bool gamma_fixed_zero = false;

  int n_margin() const { return scope == LikelihoodScope::Bivariate ? 4 : 2; }
  bool has_dep() const {
    return scope == LikelihoodScope::Bivariate &&
           copula != CopulaKind::Independence;
  }
  int dep_offset() const { return n_margin() + p; }
  int gamma_offset() const { return n_margin() + p + (has_dep() ? 1 : 0); }
  int full_size() const { return gamma_offset() + b_gamma; }
  int free_size() const {
    return full_size() - (gamma_fixed_zero ? b_gamma : 0);
  }

  Eigen::VectorXd pack(const ParameterVector& params) const;
  ParameterVector unpack(const Eigen::VectorXd& full) const;
  Eigen::VectorXd full_from_free(const Eigen::VectorXd& free) const;
  Eigen::VectorXd free_from_full(const Eigen::VectorXd& full) const;
};

/// Censored joint log-likelihood as a function of the packed full parameter
/// vector.  Dispatches each subject on its censoring pattern:
/// both events        -> copula density times both margin densities;
/// margin 1 event     -> dC/du times the margin-1 density;
/// margin 2 event     -> dC/dv times the margin-2 density;
/// both censored      -> the joint survival C itself.
/// All copula terms are evaluated in log scale directly from the margins'
/// log survival values.  Throws EvaluationError (with the subject id) if
/// any contribution is non-finite.
class LoglikFn {
 public:
  LoglikFn(const LikelihoodData& data, const ParamLayout& layout);

  double operator()(const Eigen::VectorXd& full) const;
  double eval_free(const Eigen::VectorXd& free) const {
    return (*this)(layout_.full_from_free(free));
  }
  const ParamLayout& layout() const { return layout_; }
  const LikelihoodData& data() const { return *data_; }

 private:
  const LikelihoodData* data_;
  ParamLayout layout_;
};

/// Convenience entry point over structured parameters.  Dimension mismatches
/// between `params`, `spec` and `data` throw DomainError.
double loglik(const ModelSpec& spec, const ParameterVector& params,
              const LikelihoodData& data,
              LikelihoodScope scope = LikelihoodScope::Bivariate);

}  // namespace genecop
