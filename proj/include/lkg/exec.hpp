#pragma once

namespace lkg {

/// Execution policy threaded through every kernel.
///
/// `parallel` selects the OpenMP kernels over the serial references. Both
/// produce bit-identical output: parallel kernels only partition independent
/// output elements and never reduce across threads. `fixed_order` additionally
/// forces serial left-to-right summation wherever a run-level reduction is
/// assembled (report statistics, quadrature sums); turning it off allows
/// OpenMP reductions whose rounding depends on the worker count.
struct Exec {
  bool parallel = true;
  bool fixed_order = true;

  static Exec serial() { return {false, true}; }
};

/// Sets the OpenMP worker count (n <= 0 leaves the runtime default).
void set_workers(int n);
int workers();

} // namespace lkg
