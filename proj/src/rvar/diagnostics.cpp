#include "loadshift/rvar/diagnostics.hpp"

#include <algorithm>
#include <sstream>

#include "loadshift/rvar/dynamics.hpp"
#include "loadshift/rvar/stattests.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::rvar {

DiagnosticsReport diagnose(const RVarModel& model, const TimeSeriesFrame& frame, const DiagnosticsOptions& options) {
  DiagnosticsReport r;
  const auto e = residuals(model, frame);
  const int T = static_cast<int>(e.rows());
  const int lb_lags = std::min(options.lb_lags, T - 1);
  const int adf_lag = std::clamp(std::min(options.adf_max_lag, T - 20), 0, options.adf_max_lag);
  for (std::size_t i = 0; i < e.cols(); ++i) {
    VariableDiagnostics v;
    v.name = e.names()[i];
    const Eigen::VectorXd x = e.col(i);
    try {
      v.adf_p = adf_test(x, AdfRegression::kConstant, adf_lag).p;
    } catch (const Error&) {
      v.adf_p = 1.0;
    }
    try {
      const auto lb = ljung_box(x, lb_lags);
      v.lb_q = lb.q;
      v.lb_p = lb.p;
      v.dw = durbin_watson(x);
    } catch (const Error&) {
      v.lb_p = 0.0;
      v.dw = 0.0;
    }
    r.variables.push_back(v);
  }
  const auto st = stability_test(model, options.strict_stability);
  r.stability_ok = st.stable;
  r.max_eigen_modulus = st.max_modulus();
  const auto ic = information_criteria(model, frame);
  r.aic = ic.aic;
  r.bic = ic.bic;
  return r;
}

bool diagnostics_pass(const DiagnosticsReport& report, const DiagnosticThresholds& t) {
  if (!report.stability_ok) return false;
  if (report.cointegration_ok && !*report.cointegration_ok) return false;
  return std::all_of(report.variables.begin(), report.variables.end(), [&](const VariableDiagnostics& v) {
    return v.adf_p < t.alpha && v.lb_p > t.alpha && v.dw >= t.dw_low && v.dw <= t.dw_high;
  });
}

std::string write_diagnostics_csv(const DiagnosticsReport& report) {
  std::ostringstream os;
  os << "variable,adf_p,lb_q,lb_p,dw\n";
  for (const auto& v : report.variables) {
    os << v.name << ',' << format_double(v.adf_p) << ',' << format_double(v.lb_q) << ',' << format_double(v.lb_p) << ','
       << format_double(v.dw) << '\n';
  }
  os << "\nmetric,value\n";
  os << "cointegration_ok," << (report.cointegration_ok ? (*report.cointegration_ok ? "true" : "false") : "") << '\n';
  os << "stability_ok," << (report.stability_ok ? "true" : "false") << '\n';
  os << "max_eigen_modulus," << format_double(report.max_eigen_modulus) << '\n';
  os << "aic," << format_double(report.aic) << '\n';
  os << "bic," << format_double(report.bic) << '\n';
  return os.str();
}

}  // namespace loadshift::rvar
