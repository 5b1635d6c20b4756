#include "qiren/task/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "qiren/circuit/reupload.hpp"
#include "qiren/model/checkpoint.hpp"
#include "qiren/sim/dense.hpp"
#include "qiren/spectrum/spectrum.hpp"

namespace qiren {

static std::string fmt_err(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "max err %.3g", v);
  return buf;
}

static Gate random_gate(int num_qubits, Rng& rng) {
  const int pick = int(rng.uniform() * 7.0);
  const int q = int(rng.uniform() * num_qubits);
  const double a = rng.uniform(-std::numbers::pi, std::numbers::pi);
  switch (pick) {
    case 0: return Gate::h(q);
    case 1: return Gate::rx(q, a);
    case 2: return Gate::ry(q, a);
    case 3: return Gate::rz(q, a);
    case 4:
      return Gate::rot(q, a, rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    default: {
      if (num_qubits < 2) return Gate::x(q);
      int q2 = int(rng.uniform() * (num_qubits - 1));
      if (q2 >= q) ++q2;
      return pick == 5 ? Gate::cnot(q, q2) : Gate::cz(q, q2);
    }
  }
}

static Check check_dense_oracle() {
  Rng rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    StateVector fast(3), slow(3);
    for (int g = 0; g < 20; ++g) {
      const Gate gate = random_gate(3, rng);
      apply_gate(fast, gate);
      slow = dense_apply_gate(gate, slow);
    }
    for (size_t i = 0; i < fast.amps.size(); ++i)
      worst = std::max(worst, std::abs(fast.amps[i] - slow.amps[i]));
  }
  return {"kernels match dense matrices", worst < 1e-12, fmt_err(worst)};
}

static Check check_gradients_agree() {
  CircuitSpec spec = CircuitSpec::grouped(1, 2);
  spec.reuploads = 2;
  spec.blocks = 1;
  spec.observables = {Observable::z(0)};
  Rng rng(7);
  const std::vector<double> params = init_circuit_params(spec, rng);
  const std::vector<ProgramOp> prog = build_program(spec);
  const double x = 0.37;
  const CircuitJacobian a = circuit_jacobian_paramshift(spec, prog, params, &x);
  const CircuitJacobian b = circuit_jacobian_adjoint(spec, prog, params, &x);
  double worst = 0.0;
  for (size_t i = 0; i < a.by_param.data.size(); ++i)
    worst = std::max(worst, std::abs(a.by_param.data[i] - b.by_param.data[i]));
  for (size_t i = 0; i < a.by_input.data.size(); ++i)
    worst = std::max(worst, std::abs(a.by_input.data[i] - b.by_input.data[i]));
  return {"shift rule matches reverse sweep", worst < 1e-10, fmt_err(worst)};
}

static Check check_spectrum_recursion() {
  const std::vector<double> flat = frequency_set({1.0, 1.0, 1.0});
  bool ok = flat.size() == 7;
  for (size_t i = 0; ok && i < flat.size(); ++i)
    ok = std::abs(flat[i] - (double(i) - 3.0)) < 1e-12;
  const std::vector<double> spread = frequency_set({1.0, 3.0, 9.0});
  ok = ok && spread.size() == 27 && scales_non_degenerate({1.0, 3.0, 9.0});
  return {"frequency recursion", ok,
          "sizes " + std::to_string(flat.size()) + " and " +
              std::to_string(spread.size())};
}

static Check check_encoding_band_limit() {
  CircuitSpec spec = CircuitSpec::grouped(1, 2);
  spec.reuploads = 2;
  spec.blocks = 1;
  spec.observables = {Observable::z(0)};
  Rng rng(3);
  const std::vector<double> params = init_circuit_params(spec, rng);
  Rng grid_rng(5);
  const CircuitAxisSpectrum sp =
      extract_circuit_spectrum(spec, params, 0, 64, grid_rng);
  const double mass = sp.mass_outside(predicted_axis_frequencies(spec, 0));
  return {"circuit output is band-limited", mass < 1e-10,
          "off-band mass " + std::to_string(mass)};
}

static Check check_norm_conservation() {
  Rng rng(23);
  StateVector psi(6);
  for (int g = 0; g < 50; ++g) apply_gate(psi, random_gate(6, rng));
  const double err = std::abs(psi.norm_sq() - 1.0);
  return {"norm conserved", err < 1e-10, fmt_err(err)};
}

static Check check_checkpoint_roundtrip() {
  ModelConfig cfg = ModelConfig::defaults(Family::PureQuantum, 1);
  Rng rng(9);
  LayerStack model = build_model(cfg, rng);
  const auto path =
      std::filesystem::temp_directory_path() / "qiren_selfcheck.bin";
  save_checkpoint(path.string(), cfg, model);
  LoadedCheckpoint loaded = load_checkpoint(path.string());
  std::filesystem::remove(path);
  const auto a = model.params(), b = loaded.model.params();
  bool ok = a.size() == b.size();
  for (size_t i = 0; ok && i < a.size(); ++i)
    ok = a[i]->value == b[i]->value;
  return {"checkpoint round-trips", ok, ok ? "values identical" : "mismatch"};
}

std::vector<Check> run_self_checks() {
  return {check_dense_oracle(),      check_gradients_agree(),
          check_spectrum_recursion(), check_encoding_band_limit(),
          check_norm_conservation(), check_checkpoint_roundtrip()};
}

}  // namespace qiren
