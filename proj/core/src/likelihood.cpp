#include "genecop/likelihood.hpp"

#include <cmath>

namespace genecop {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MarginEval margin_eval(double lambda, double k, double linear_predictor,
                       double t) {
  if (!(std::isfinite(lambda) && lambda > 0.0))
    throw DomainError("margin_eval: lambda must be > 0");
  if (!(std::isfinite(k) && k > 0.0))
    throw DomainError("margin_eval: k must be > 0");
  if (!(std::isfinite(t) && t >= 0.0))
    throw DomainError("margin_eval: t must be finite and >= 0");
  if (!std::isfinite(linear_predictor))
    throw DomainError("margin_eval: non-finite linear predictor");
  MarginEval out;
  out.cum_hazard = std::pow(lambda * t, k) * std::exp(linear_predictor);
  out.survival = std::exp(-out.cum_hazard);
  // hazard = k * lambda^k * t^(k-1) * exp(lp)
  const double hazard = t > 0.0
                            ? k * out.cum_hazard / t
                            : (k == 1.0 ? lambda * std::exp(linear_predictor)
                                        : (k > 1.0 ? 0.0 : kInf));
  out.density = hazard * out.survival;
  return out;
}

double linear_predictor(const Eigen::VectorXd& covariates,
                        const Eigen::VectorXd& beta,
                        const Eigen::VectorXd& design_row,
                        const Eigen::VectorXd& gamma) {
  if (covariates.size() != beta.size())
    throw DomainError("linear_predictor: covariate/beta size mismatch");
  if (design_row.size() != gamma.size())
    throw DomainError("linear_predictor: design/gamma size mismatch");
  return covariates.dot(beta) + design_row.dot(gamma);
}

LikelihoodData LikelihoodData::build(const std::vector<SubjectRecord>& records,
                                     const DesignMatrix& design) {
  const auto n = static_cast<Eigen::Index>(records.size());
  if (n == 0) throw DomainError("likelihood needs at least one subject");
  if (design.rows.rows() != n)
    throw DomainError("design row count does not match record count");
  const std::size_t p = records.front().covariates.size();

  LikelihoodData data;
  data.y1.resize(n);
  data.y2.resize(n);
  data.log_y1.resize(n);
  data.log_y2.resize(n);
  data.d1.resize(static_cast<std::size_t>(n));
  data.d2.resize(static_cast<std::size_t>(n));
  data.X.resize(n, static_cast<Eigen::Index>(p));
  data.M = design.rows;
  data.ids.reserve(static_cast<std::size_t>(n));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& rec = records[static_cast<std::size_t>(i)];
    validate_record(rec, p, rec.genotypes.size());
    if ((rec.d1 && rec.y1 == 0.0) || (rec.d2 && rec.y2 == 0.0))
      throw DomainError("subject " + rec.id +
                        ": observed event at time zero has no density");
    data.y1[i] = rec.y1;
    data.y2[i] = rec.y2;
    data.log_y1[i] = std::log(rec.y1);
    data.log_y2[i] = std::log(rec.y2);
    data.d1[static_cast<std::size_t>(i)] = rec.d1 ? 1 : 0;
    data.d2[static_cast<std::size_t>(i)] = rec.d2 ? 1 : 0;
    for (std::size_t j = 0; j < p; ++j)
      data.X(i, static_cast<Eigen::Index>(j)) = rec.covariates[j];
    data.ids.push_back(rec.id);
  }
  return data;
}

Eigen::VectorXd ParamLayout::pack(const ParameterVector& params) const {
  if (params.beta.size() != p)
    throw DomainError("pack: beta dimension mismatch");
  if (params.gamma.size() != b_gamma)
    throw DomainError("pack: gamma dimension mismatch");
  if (has_dep() != params.dep.has_value())
    throw DomainError("pack: dependence parameter presence mismatch");
  Eigen::VectorXd full(full_size());
  full[0] = params.log_lambda1;
  full[1] = params.log_k1;
  if (scope == LikelihoodScope::Bivariate) {
    full[2] = params.log_lambda2;
    full[3] = params.log_k2;
  }
  full.segment(n_margin(), p) = params.beta;
  if (has_dep()) full[dep_offset()] = *params.dep;
  full.segment(gamma_offset(), b_gamma) = params.gamma;
  return full;
}

ParameterVector ParamLayout::unpack(const Eigen::VectorXd& full) const {
  if (full.size() != full_size())
    throw DomainError("unpack: packed vector has wrong dimension");
  ParameterVector params;
  params.log_lambda1 = full[0];
  params.log_k1 = full[1];
  if (scope == LikelihoodScope::Bivariate) {
    params.log_lambda2 = full[2];
    params.log_k2 = full[3];
  }
  params.beta = full.segment(n_margin(), p);
  if (has_dep()) params.dep = full[dep_offset()];
  params.gamma = full.segment(gamma_offset(), b_gamma);
  return params;
}

Eigen::VectorXd ParamLayout::full_from_free(const Eigen::VectorXd& free) const {
  if (free.size() != free_size())
    throw DomainError("full_from_free: free vector has wrong dimension");
  if (!gamma_fixed_zero) return free;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(full_size());
  full.head(free.size()) = free;
  return full;
}

Eigen::VectorXd ParamLayout::free_from_full(const Eigen::VectorXd& full) const {
  if (full.size() != full_size())
    throw DomainError("free_from_full: packed vector has wrong dimension");
  return full.head(free_size());
}

LoglikFn::LoglikFn(const LikelihoodData& data, const ParamLayout& layout)
    : data_(&data), layout_(layout) {
  if (layout_.p != data.p() || layout_.b_gamma != data.b_gamma())
    throw DomainError("likelihood layout does not match the data dimensions");
}

double LoglikFn::operator()(const Eigen::VectorXd& full) const {
  const ParamLayout& L = layout_;
  if (full.size() != L.full_size())
    throw DomainError("loglik: packed vector has wrong dimension");
  const LikelihoodData& d = *data_;

  const double log_lambda1 = full[0];
  const double k1 = std::exp(full[1]);
  const double log_k1 = full[1];
  const bool bivar = L.scope == LikelihoodScope::Bivariate;
  const double log_lambda2 = bivar ? full[2] : 0.0;
  const double k2 = bivar ? std::exp(full[3]) : 1.0;
  const double log_k2 = bivar ? full[3] : 0.0;

  CopulaFamily fam = CopulaFamily::independence();
  if (L.has_dep()) {
    const double dep = full[L.dep_offset()];
    fam = L.copula == CopulaKind::Clayton
              ? CopulaFamily::clayton(std::exp(dep))
              : CopulaFamily::gumbel(1.0 + std::exp(dep));
  }

  // Shared proportional-hazards shift: covariates plus functional design.
  Eigen::VectorXd lp = Eigen::VectorXd::Zero(d.n());
  if (L.p > 0) lp.noalias() += d.X * full.segment(L.n_margin(), L.p);
  if (L.b_gamma > 0)
    lp.noalias() += d.M * full.segment(L.gamma_offset(), L.b_gamma);

  double total = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    const double log_cumhaz1 = k1 * (log_lambda1 + d.log_y1[i]) + lp[i];
    const double cumhaz1 = std::exp(log_cumhaz1);
    const bool ev1 = d.d1[static_cast<std::size_t>(i)] != 0;
    double term;

    if (!bivar) {
      term = ev1 ? log_k1 + log_cumhaz1 - d.log_y1[i] - cumhaz1 : -cumhaz1;
    } else {
      const double log_cumhaz2 = k2 * (log_lambda2 + d.log_y2[i]) + lp[i];
      const double cumhaz2 = std::exp(log_cumhaz2);
      const bool ev2 = d.d2[static_cast<std::size_t>(i)] != 0;
      const double lu = -cumhaz1;
      const double lv = -cumhaz2;
      if (ev1 && ev2) {
        term = log_density_from_logs(fam, lu, lv) +
               (log_k1 + log_cumhaz1 - d.log_y1[i] - cumhaz1) +
               (log_k2 + log_cumhaz2 - d.log_y2[i] - cumhaz2);
      } else if (ev1) {
        term = log_partial_u_from_logs(fam, lu, lv) +
               (log_k1 + log_cumhaz1 - d.log_y1[i] - cumhaz1);
      } else if (ev2) {
        term = log_partial_v_from_logs(fam, lu, lv) +
               (log_k2 + log_cumhaz2 - d.log_y2[i] - cumhaz2);
      } else {
        term = log_cdf_from_logs(fam, lu, lv);
      }
    }

    if (!std::isfinite(term))
      throw EvaluationError("non-finite log-likelihood contribution",
                            d.ids[static_cast<std::size_t>(i)]);
    total += term;
  }
  return total;
}

double loglik(const ModelSpec& spec, const ParameterVector& params,
              const LikelihoodData& data, LikelihoodScope scope) {
  validate_model_spec(spec);
  ParamLayout layout;
  layout.copula = spec.copula;
  layout.scope = scope;
  layout.p = static_cast<int>(data.p());
  layout.b_gamma = static_cast<int>(data.b_gamma());
  LoglikFn fn(data, layout);
  return fn(layout.pack(params));
}

}  // namespace genecop
