#pragma once
#include <string>
#include <vector>

#include "qiren/circuit/reupload.hpp"
#include "qiren/data/dataset.hpp"
#include "qiren/nn/layers.hpp"
#include "qiren/sim/state.hpp"

namespace qiren {

// |coefficient| above this counts as real spectral support; below is
// floating-point noise.
inline constexpr double kSupportThreshold = 1e-8;

// Frequencies reachable by a sum of encodings with the given angle scales:
// every scale contributes -w, 0 or +w. Built by the recursion
// Omega_k = (Omega_{k-1} - w_k) u Omega_{k-1} u (Omega_{k-1} + w_k),
// starting from {-w_1, 0, +w_1}; duplicates merged with a small tolerance.
std::vector<double> frequency_set(const std::vector<double>& scales);

// Per-position gap condition: flag k is true iff w_k > 2 * sum_{j<k} w_j
// (positivity for the first). All-true means all 3^K sign combinations land
// on distinct frequencies.
std::vector<bool> check_nondegeneracy(const std::vector<double>& scales);
bool scales_non_degenerate(const std::vector<double>& scales);

// Plain integer encoding: one axis covers {-d*L .. d*L} (d wires per
// feature, L uploads); the full spectrum is that range on every axis.
std::vector<int> predicted_axis_range(int d, int L);
std::vector<std::vector<int>> predicted_spectrum_plain(int d, int d_h, int L);

// Support of a circuit's output along one input axis: each (wire carrying
// the feature) x (upload) pair contributes one scaled encoding.
std::vector<double> predicted_axis_frequencies(const CircuitSpec& spec,
                                               int feature);

// Plain O(N^2) transform, kept deliberately independent of any FFT: it is
// the oracle the rest of the suite is checked against. N is capped at 4096.
std::vector<cplx> dft(const std::vector<double>& x);
std::vector<cplx> dft(const std::vector<cplx>& x);
std::vector<double> idft_real(const std::vector<cplx>& coeffs);

// Samples the circuit's output along `axis` on a uniform [0, 2pi) grid
// (other inputs held at rng-drawn values), DFTs it, and reports Fourier
// coefficients by signed integer frequency. grid_size must exceed twice the
// largest predicted frequency or the call is rejected as aliased.
struct CircuitAxisSpectrum {
  std::vector<long> bins;    // signed frequencies, ascending
  std::vector<cplx> coeffs;  // X_k / N, so a pure cos(h) shows as +-0.5
  // frequencies whose |coefficient| clears kSupportThreshold
  std::vector<long> support() const;
  // fraction of sum|coeff|^2 lying outside `allowed` frequencies
  double mass_outside(const std::vector<double>& allowed) const;
};
CircuitAxisSpectrum extract_circuit_spectrum(const CircuitSpec& spec,
                                             const std::vector<double>& params,
                                             int axis, int grid_size,
                                             Rng& rng);

// Brick-wall partition: `low` keeps |signed freq| <= cutoff_bin, `high`
// keeps the rest. low + high reconstructs the input exactly.
struct BandSplit {
  std::vector<double> low, high;
};
BandSplit band_split(const std::vector<double>& x, int cutoff_bin);
// cutoff_fraction in (0,1), applied to the Nyquist bin N/2.
BandSplit band_split_fraction(const std::vector<double>& x,
                              double cutoff_fraction);

// Mean squared error split by band. The two error bands live on disjoint
// frequency supports, so the cross term vanishes up to roundoff and
// total ~= low + high: the decomposition tells you where a model fails.
struct BandErrors {
  double total = 0, low = 0, high = 0, cross = 0;
};
BandErrors band_error_decomposition(const std::vector<double>& pred,
                                    const std::vector<double>& target,
                                    int cutoff_bin);

// One-sided spectrum of a real signal, bins 0 .. N/2.
struct SpectrumRow {
  double frequency = 0, magnitude = 0, re = 0, im = 0;
};
std::vector<SpectrumRow> real_spectrum(const std::vector<double>& signal);

// Spectrum of a model's predictions over a uniform 1-D grid.
std::vector<SpectrumRow> model_output_spectrum(LayerStack& model,
                                               const Dataset& ds);

// "frequency,magnitude" rows, plus ",real,imag" when asked for.
void write_spectrum_csv(const std::string& path,
                        const std::vector<SpectrumRow>& rows,
                        bool with_complex = false);

}  // namespace qiren
