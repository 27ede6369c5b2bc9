#pragma once

#include <cmath>

#include "genecop/types.hpp"

namespace genecop {

/// An Archimedean survival copula family with its dependence parameter.
/// Clayton requires eta > 0, Gumbel eta > 1; Independence carries no
/// parameter.  Constructed through the checked factories.
struct CopulaFamily {
  CopulaKind kind = CopulaKind::Independence;
  double eta = std::numeric_limits<double>::quiet_NaN();

  static CopulaFamily clayton(double eta);
  static CopulaFamily gumbel(double eta);
  static CopulaFamily independence();
};

/// C(u,v).  Arguments must lie in [0,1]; the copula boundary identities
/// C(u,0)=0, C(u,1)=u hold exactly.
double cdf(const CopulaFamily& fam, double u, double v);

/// First partial derivatives dC/du and dC/dv (the conditional distribution
/// of the other coordinate).  Requires the differentiated coordinate in
/// (0,1); the conditioning coordinate may touch the boundary.
double partial_u(const CopulaFamily& fam, double u, double v);
double partial_v(const CopulaFamily& fam, double u, double v);

/// Copula density c(u,v) = d2C/dudv on (0,1)^2, and its logarithm (the log
/// form stays finite deep in the corners where the density under/overflows).
double density(const CopulaFamily& fam, double u, double v);
double log_density(const CopulaFamily& fam, double u, double v);

/// Log-scale evaluations used by the censored-data likelihood: lu = log u,
/// lv = log v with lu, lv in [-inf, 0].  Passing log survival values
/// directly avoids the exp/log round trip and keeps extreme tails exact.
double log_cdf_from_logs(const CopulaFamily& fam, double lu, double lv);
double log_partial_u_from_logs(const CopulaFamily& fam, double lu, double lv);
double log_partial_v_from_logs(const CopulaFamily& fam, double lu, double lv);
double log_density_from_logs(const CopulaFamily& fam, double lu, double lv);

/// Kendall tau <-> dependence parameter maps: Clayton tau = eta/(eta+2),
/// Gumbel tau = 1 - 1/eta.  tau_to_eta requires tau in (0,1) (and > 0
/// because both families model positive dependence only); Independence
/// accepts exactly tau = 0 and has no eta (throws otherwise).
double tau_to_eta(CopulaKind kind, double tau);
double eta_to_tau(CopulaKind kind, double eta);

/// Inverse conditional distribution: the u in (0,1) solving
/// dC/dv (u, v) = w, for v, w in (0,1).  Closed form for Clayton and
/// Independence; safeguarded Newton for Gumbel (|h - w| tolerance 1e-10,
/// 200-iteration cap, ConvergenceError beyond it).  Feeding standard
/// uniforms (w, v) through this map samples (U,V) from the copula.
double h_inverse(const CopulaFamily& fam, double w, double v);

}  // namespace genecop
