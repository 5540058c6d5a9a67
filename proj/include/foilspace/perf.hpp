#pragma once

#include <functional>
#include <string>

#include "foilspace/types.hpp"

namespace foilspace {

struct FlowCondition {
  double reynolds = 500000.0;
  double mach = 0.0;
  double alpha_deg = 3.0;
  int iter_limit = 200;
};

void validate_flow_condition(const FlowCondition& fc);

struct PolarPoint {
  double cl = 0.0;
  double cd = 0.0;
  double ld = 0.0;  // cl/cd when converged and cd != 0
  bool converged = false;
  std::string source;  // "xfoil" or "surrogate"
};

/// Closed-form aerodynamic stand-in so the pipeline runs without external
/// binaries. Lift from thin-airfoil theory, CL = 2*pi*(alpha + 2*m_c) with
/// m_c the mean-line camber integral; drag from turbulent flat-plate skin
/// friction with a thickness form factor, CD = 0.074/Re^0.2 * (1 + 2.7 t/c).
/// A documented PROXY: trends are monotone and deterministic, values are not
/// validated physics. Exactly symmetric profiles give CL = 0 at alpha = 0.
PolarPoint surrogate_eval(const PolylineFoil& pf, const FlowCondition& fc);

struct XfoilOptions {
  std::string exe_path = "xfoil";
  std::string workdir;          // empty: private temporary directory
  double timeout_sec = 20.0;
  bool repanel = true;          // run PANE before analysis
};

/// Drives one XFOIL analysis as a child process: writes the profile as a
/// Selig coordinate file, streams the command script over stdin, and parses
/// CL/CD from the polar accumulation file. Non-convergence yields
/// converged=false; a missing executable, an unparseable polar, or an
/// exceeded timeout raise External/Timeout errors instead.
PolarPoint xfoil_eval(const PolylineFoil& pf, const FlowCondition& fc,
                      const XfoilOptions& opt);

/// Evaluation callback used by the quality and ssv layers.
using PerfEvaluator = std::function<PolarPoint(const PolylineFoil&)>;

PerfEvaluator make_surrogate_evaluator(const FlowCondition& fc);
PerfEvaluator make_xfoil_evaluator(const FlowCondition& fc,
                                   const XfoilOptions& opt);

}  // namespace foilspace
