#include "qiren/spectrum/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace qiren {

static constexpr double kFreqTol = 1e-9;

static std::vector<double> dedup_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > kFreqTol) out.push_back(x);
  return out;
}

std::vector<double> frequency_set(const std::vector<double>& scales) {
  if (scales.empty()) return {0.0};
  std::vector<double> omega =
      dedup_sorted({-scales[0], 0.0, scales[0]});
  for (size_t k = 1; k < scales.size(); ++k) {
    std::vector<double> next;
    next.reserve(omega.size() * 3);
    for (double w : omega) {
      next.push_back(w - scales[k]);
      next.push_back(w);
      next.push_back(w + scales[k]);
    }
    omega = dedup_sorted(std::move(next));
  }
  return omega;
}

std::vector<bool> check_nondegeneracy(const std::vector<double>& scales) {
  std::vector<bool> flags(scales.size());
  double partial = 0.0;
  for (size_t k = 0; k < scales.size(); ++k) {
    flags[k] = scales[k] > 2.0 * partial && scales[k] > 0.0;
    partial += scales[k];
  }
  return flags;
}

bool scales_non_degenerate(const std::vector<double>& scales) {
  const std::vector<bool> flags = check_nondegeneracy(scales);
  return std::all_of(flags.begin(), flags.end(), [](bool b) { return b; });
}

std::vector<int> predicted_axis_range(int d, int L) {
  if (d < 1 || L < 1) throw std::invalid_argument("d and L must be >= 1");
  std::vector<int> r;
  for (int k = -d * L; k <= d * L; ++k) r.push_back(k);
  return r;
}

std::vector<std::vector<int>> predicted_spectrum_plain(int d, int d_h, int L) {
  if (d_h < 1) throw std::invalid_argument("d_h must be >= 1");
  const std::vector<int> axis = predicted_axis_range(d, L);
  double total = 1.0;
  for (int j = 0; j < d_h; ++j) total *= double(axis.size());
  if (total > 1e6)
    throw std::invalid_argument("predicted spectrum too large to enumerate");
  std::vector<std::vector<int>> grid{{}};
  for (int j = 0; j < d_h; ++j) {
    std::vector<std::vector<int>> next;
    next.reserve(grid.size() * axis.size());
    for (const auto& prefix : grid)
      for (int f : axis) {
        std::vector<int> v = prefix;
        v.push_back(f);
        next.push_back(std::move(v));
      }
    grid = std::move(next);
  }
  return grid;
}

std::vector<double> predicted_axis_frequencies(const CircuitSpec& spec,
                                               int feature) {
  spec.validate();
  if (feature < 0 || feature >= spec.num_features)
    throw std::invalid_argument("feature index out of range");
  std::vector<double> scales;
  for (int q = 0; q < spec.num_qubits; ++q)
    if (spec.wire_feature[q] == feature)
      for (int l = 0; l < spec.reuploads; ++l)
        scales.push_back(std::abs(spec.wire_scale[q]));
  return frequency_set(scales);
}

std::vector<cplx> dft(const std::vector<cplx>& x) {
  const size_t n = x.size();
  if (n == 0) throw std::invalid_argument("dft of empty signal");
  if (n > 4096) throw std::invalid_argument("dft capped at 4096 samples");
  std::vector<cplx> out(n);
  const double w = -2.0 * std::numbers::pi / double(n);
  for (size_t k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (size_t t = 0; t < n; ++t)
      s += x[t] * std::polar(1.0, w * double(k) * double(t));
    out[k] = s;
  }
  return out;
}

std::vector<cplx> dft(const std::vector<double>& x) {
  std::vector<cplx> cx(x.begin(), x.end());
  return dft(cx);
}

std::vector<double> idft_real(const std::vector<cplx>& coeffs) {
  const size_t n = coeffs.size();
  if (n == 0) throw std::invalid_argument("idft of empty spectrum");
  if (n > 4096) throw std::invalid_argument("idft capped at 4096 samples");
  std::vector<double> out(n);
  const double w = 2.0 * std::numbers::pi / double(n);
  for (size_t t = 0; t < n; ++t) {
    cplx s = 0.0;
    for (size_t k = 0; k < n; ++k)
      s += coeffs[k] * std::polar(1.0, w * double(k) * double(t));
    out[t] = s.real() / double(n);
  }
  return out;
}

std::vector<long> CircuitAxisSpectrum::support() const {
  std::vector<long> out;
  for (size_t i = 0; i < bins.size(); ++i)
    if (std::abs(coeffs[i]) > kSupportThreshold) out.push_back(bins[i]);
  return out;
}

double CircuitAxisSpectrum::mass_outside(
    const std::vector<double>& allowed) const {
  double in = 0.0, out = 0.0;
  for (size_t i = 0; i < bins.size(); ++i) {
    const double m = std::norm(coeffs[i]);
    bool ok = false;
    for (double a : allowed)
      if (std::abs(a - double(bins[i])) < kFreqTol) ok = true;
    (ok ? in : out) += m;
  }
  const double total = in + out;
  return total > 0.0 ? out / total : 0.0;
}

CircuitAxisSpectrum extract_circuit_spectrum(const CircuitSpec& spec,
                                             const std::vector<double>& params,
                                             int axis, int grid_size,
                                             Rng& rng) {
  if (spec.noise_bound != 0.0)
    throw std::logic_error("spectrum extraction needs a noiseless circuit");
  if (axis < 0 || axis >= spec.num_features)
    throw std::invalid_argument("axis out of range");
  const std::vector<double> pred = predicted_axis_frequencies(spec, axis);
  double max_pred = 0.0;
  for (double f : pred) max_pred = std::max(max_pred, std::abs(f));
  if (double(grid_size) <= 2.0 * max_pred)
    throw std::invalid_argument("grid too small: spectrum would alias");

  std::vector<double> h(static_cast<size_t>(spec.num_features));
  for (double& v : h) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const std::vector<ProgramOp> prog = build_program(spec);

  std::vector<double> samples(static_cast<size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    h[size_t(axis)] = 2.0 * std::numbers::pi * double(i) / double(grid_size);
    samples[size_t(i)] = circuit_forward(spec, prog, params, h.data())[0];
  }
  const std::vector<cplx> coeffs = dft(samples);

  CircuitAxisSpectrum out;
  const long n = grid_size;
  for (long k = -(n - 1) / 2; k <= n / 2; ++k) {
    const size_t bin = size_t((k + n) % n);
    out.bins.push_back(k);
    out.coeffs.push_back(coeffs[bin] / double(n));
  }
  return out;
}

BandSplit band_split(const std::vector<double>& x, int cutoff_bin) {
  if (cutoff_bin < 0) throw std::invalid_argument("cutoff bin must be >= 0");
  if (x.size() < 4) throw std::invalid_argument("signal too short to split");
  const std::vector<cplx> coeffs = dft(x);
  const size_t n = coeffs.size();
  std::vector<cplx> lo(n, cplx(0.0, 0.0)), hi(n, cplx(0.0, 0.0));
  for (size_t k = 0; k < n; ++k) {
    // signed frequency of bin k under periodic extension
    const long sk = k <= n / 2 ? long(k) : long(k) - long(n);
    if (std::labs(sk) <= cutoff_bin)
      lo[k] = coeffs[k];
    else
      hi[k] = coeffs[k];
  }
  return {idft_real(lo), idft_real(hi)};
}

BandSplit band_split_fraction(const std::vector<double>& x,
                              double cutoff_fraction) {
  if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0))
    throw std::invalid_argument("cutoff fraction must be in (0,1)");
  const int nyquist = int(x.size() / 2);
  return band_split(x, int(std::floor(cutoff_fraction * nyquist)));
}

static double vec_mse(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s / double(v.size());
}

BandErrors band_error_decomposition(const std::vector<double>& pred,
                                    const std::vector<double>& target,
                                    int cutoff_bin) {
  if (pred.size() != target.size())
    throw std::invalid_argument("band_error_decomposition: size mismatch");
  std::vector<double> err(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) err[i] = pred[i] - target[i];
  BandSplit bands = band_split(err, cutoff_bin);
  BandErrors e;
  e.total = vec_mse(err);
  e.low = vec_mse(bands.low);
  e.high = vec_mse(bands.high);
  double cross = 0.0;
  for (size_t i = 0; i < err.size(); ++i)
    cross += bands.low[i] * bands.high[i];
  e.cross = 2.0 * cross / double(err.size());
  return e;
}

std::vector<SpectrumRow> real_spectrum(const std::vector<double>& signal) {
  const std::vector<cplx> coeffs = dft(signal);
  const size_t n = coeffs.size();
  std::vector<SpectrumRow> rows;
  rows.reserve(n / 2 + 1);
  for (size_t k = 0; k <= n / 2; ++k) {
    SpectrumRow r;
    r.frequency = double(k);
    r.re = coeffs[k].real();
    r.im = coeffs[k].imag();
    r.magnitude = std::abs(coeffs[k]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<SpectrumRow> model_output_spectrum(LayerStack& model,
                                               const Dataset& ds) {
  if (ds.x.cols != 1)
    throw std::invalid_argument("spectrum needs a 1-D dataset");
  const size_t n = ds.size();
  if (n >= 3) {
    const double step = ds.x(1, 0) - ds.x(0, 0);
    for (size_t i = 1; i < n; ++i)
      if (std::abs(ds.x(i, 0) - ds.x(i - 1, 0) - step) > 1e-9)
        throw std::invalid_argument("spectrum needs a uniform grid");
  }
  const Matrix pred = model.forward(ds.x, Mode::Eval, nullptr);
  std::vector<double> signal(n);
  for (size_t i = 0; i < n; ++i) signal[i] = pred(i, 0);
  return real_spectrum(signal);
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<SpectrumRow>& rows,
                        bool with_complex) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << (with_complex ? "frequency,magnitude,real,imag\n"
                       : "frequency,magnitude\n");
  out.precision(17);
  for (const SpectrumRow& r : rows) {
    out << r.frequency << ',' << r.magnitude;
    if (with_complex) out << ',' << r.re << ',' << r.im;
    out << '\n';
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace qiren
