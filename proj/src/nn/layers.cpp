#include "qiren/nn/layers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qiren/util/parallel.hpp"

namespace qiren {

static void check_cols(const Matrix& x, int want, const char* who) {
  if (static_cast<int>(x.cols) != want)
    throw std::invalid_argument(std::string(who) + ": input width mismatch");
}

Linear::Linear(int in, int out, Rng& rng, double w_bound, double b_bound)
    : in_dim(in), out_dim(out), w("weight", size_t(in) * out),
      b("bias", out) {
  if (w_bound < 0.0) w_bound = 1.0 / std::sqrt(double(in));
  if (b_bound < 0.0) b_bound = 1.0 / std::sqrt(double(in));
  for (double& v : w.value) v = rng.uniform(-w_bound, w_bound);
  for (double& v : b.value) v = rng.uniform(-b_bound, b_bound);
}

Matrix Linear::forward(const Matrix& x, Mode mode, Rng*) {
  check_cols(x, in_dim, "Linear");
  Matrix y(x.rows, out_dim);
  for (size_t r = 0; r < x.rows; ++r)
    for (int o = 0; o < out_dim; ++o) {
      double s = b.value[o];
      for (int i = 0; i < in_dim; ++i)
        s += w.value[size_t(o) * in_dim + i] * x(r, i);
      y(r, o) = s;
    }
  if (mode == Mode::Train) last_x = x;
  return y;
}

Matrix Linear::backward(const Matrix& dout) {
  const Matrix& x = last_x;
  Matrix dx(x.rows, in_dim);
  for (size_t r = 0; r < x.rows; ++r)
    for (int o = 0; o < out_dim; ++o) {
      const double d = dout(r, o);
      b.grad[o] += d;
      for (int i = 0; i < in_dim; ++i) {
        w.grad[size_t(o) * in_dim + i] += d * x(r, i);
        dx(r, i) += d * w.value[size_t(o) * in_dim + i];
      }
    }
  return dx;
}

BatchNorm::BatchNorm(int d)
    : dim(d), gamma("gamma", d), beta("beta", d), running_mean(d, 0.0),
      running_var(d, 1.0) {
  std::fill(gamma.value.begin(), gamma.value.end(), 1.0);
}

Matrix BatchNorm::forward(const Matrix& x, Mode mode, Rng*) {
  check_cols(x, dim, "BatchNorm");
  const size_t B = x.rows;
  Matrix y(B, dim);
  if (mode == Mode::Eval) {
    for (int c = 0; c < dim; ++c) {
      const double inv = 1.0 / std::sqrt(running_var[c] + eps);
      for (size_t r = 0; r < B; ++r)
        y(r, c) = gamma.value[c] * (x(r, c) - running_mean[c]) * inv +
                  beta.value[c];
    }
    return y;
  }
  if (B < 2)
    throw std::invalid_argument("BatchNorm needs a batch of >= 2 to train");
  last_xhat = Matrix(B, dim);
  last_mean.assign(dim, 0.0);
  last_inv_std.assign(dim, 0.0);
  for (int c = 0; c < dim; ++c) {
    double mean = 0.0;
    for (size_t r = 0; r < B; ++r) mean += x(r, c);
    mean /= double(B);
    double var = 0.0;
    for (size_t r = 0; r < B; ++r) {
      const double d = x(r, c) - mean;
      var += d * d;
    }
    var /= double(B);  // biased: this is what normalises the batch
    const double inv = 1.0 / std::sqrt(var + eps);
    for (size_t r = 0; r < B; ++r) {
      const double xh = (x(r, c) - mean) * inv;
      last_xhat(r, c) = xh;
      y(r, c) = gamma.value[c] * xh + beta.value[c];
    }
    // running stats track the unbiased variance, torch-style
    const double unbiased = B > 1 ? var * double(B) / double(B - 1) : var;
    running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * mean;
    running_var[c] = (1.0 - momentum) * running_var[c] + momentum * unbiased;
    last_mean[c] = mean;
    last_inv_std[c] = inv;
  }
  return y;
}

Matrix BatchNorm::backward(const Matrix& dout) {
  const size_t B = dout.rows;
  Matrix dx(B, dim);
  for (int c = 0; c < dim; ++c) {
    double sum_d = 0.0, sum_dxhat = 0.0;
    for (size_t r = 0; r < B; ++r) {
      const double d = dout(r, c);
      sum_d += d;
      sum_dxhat += d * last_xhat(r, c);
      gamma.grad[c] += d * last_xhat(r, c);
      beta.grad[c] += d;
    }
    const double g = gamma.value[c], inv = last_inv_std[c];
    for (size_t r = 0; r < B; ++r) {
      // dx = (g*inv/B) * (B*dout - sum(dout) - xhat * sum(dout*xhat))
      dx(r, c) = g * inv / double(B) *
                 (double(B) * dout(r, c) - sum_d -
                  last_xhat(r, c) * sum_dxhat);
    }
  }
  return dx;
}

Matrix ReLU::forward(const Matrix& x, Mode mode, Rng*) {
  Matrix y = x;
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  if (mode == Mode::Train) last_x = x;
  return y;
}

Matrix ReLU::backward(const Matrix& dout) {
  Matrix dx = dout;
  for (size_t i = 0; i < dx.data.size(); ++i)
    if (last_x.data[i] <= 0.0) dx.data[i] = 0.0;
  return dx;
}

Matrix Tanh::forward(const Matrix& x, Mode mode, Rng*) {
  Matrix y = x;
  for (double& v : y.data) v = std::tanh(v);
  if (mode == Mode::Train) last_y = y;
  return y;
}

Matrix Tanh::backward(const Matrix& dout) {
  Matrix dx = dout;
  for (size_t i = 0; i < dx.data.size(); ++i)
    dx.data[i] *= 1.0 - last_y.data[i] * last_y.data[i];
  return dx;
}

Matrix Sine::forward(const Matrix& x, Mode mode, Rng*) {
  Matrix y(x.rows, x.cols);
  Matrix arg(x.rows, x.cols);
  for (size_t i = 0; i < x.data.size(); ++i) {
    arg.data[i] = omega0 * x.data[i];
    y.data[i] = std::sin(arg.data[i]);
  }
  last_arg = std::move(arg);  // kept in eval too: the init check reads it
  return y;
}

Matrix Sine::backward(const Matrix& dout) {
  Matrix dx = dout;
  for (size_t i = 0; i < dx.data.size(); ++i)
    dx.data[i] *= omega0 * std::cos(last_arg.data[i]);
  return dx;
}

RandomFourier::RandomFourier(int in, int m, double sigma, Rng& rng)
    : in_dim(in), num_freqs(m), proj(m, in) {
  for (double& v : proj.data) v = rng.normal(0.0, sigma);
}

Matrix RandomFourier::forward(const Matrix& x, Mode mode, Rng*) {
  check_cols(x, in_dim, "RandomFourier");
  const double two_pi = 2.0 * std::numbers::pi;
  Matrix y(x.rows, 2 * num_freqs);
  for (size_t r = 0; r < x.rows; ++r)
    for (int f = 0; f < num_freqs; ++f) {
      double a = 0.0;
      for (int i = 0; i < in_dim; ++i) a += proj(f, i) * x(r, i);
      a *= two_pi;
      y(r, f) = std::cos(a);
      y(r, num_freqs + f) = std::sin(a);
    }
  if (mode == Mode::Train) last_x = x;
  return y;
}

Matrix RandomFourier::backward(const Matrix& dout) {
  const double two_pi = 2.0 * std::numbers::pi;
  const Matrix& x = last_x;
  Matrix dx(x.rows, in_dim);
  for (size_t r = 0; r < x.rows; ++r)
    for (int f = 0; f < num_freqs; ++f) {
      double a = 0.0;
      for (int i = 0; i < in_dim; ++i) a += proj(f, i) * x(r, i);
      a *= two_pi;
      const double da =
          -std::sin(a) * dout(r, f) + std::cos(a) * dout(r, num_freqs + f);
      for (int i = 0; i < in_dim; ++i)
        dx(r, i) += da * two_pi * proj(f, i);
    }
  return dx;
}

QuantumLayer::QuantumLayer(CircuitSpec s, Rng& rng, int id)
    : spec(std::move(s)), program(build_program(spec)),
      theta("theta", spec.num_params(), /*quantum=*/true), layer_id(id) {
  theta.value = init_circuit_params(spec, rng);
}

Matrix QuantumLayer::forward(const Matrix& x, Mode mode, Rng* noise_rng) {
  check_cols(x, spec.num_features, "QuantumLayer");
  const size_t B = x.rows;
  const size_t M = size_t(spec.num_outputs());
  Matrix y(B, M);
  const bool cache = mode == Mode::Train;
  if (cache) {
    last_x = x;
    last_states.assign(B, StateVector(0));
  }
  const bool noisy =
      mode == Mode::Eval && spec.noise_bound > 0.0 && noise_rng != nullptr;

  // one pass over the observables: all single-Z means one sweep per state
  std::vector<int> z_wires(M);
  std::vector<double> z_coeffs(M);
  bool fast = true;
  for (size_t m = 0; m < M; ++m) {
    const Observable& o = spec.observables[m];
    if (o.terms.size() == 1 && o.terms[0].ops.size() == 1 &&
        o.terms[0].ops[0].second == Pauli::Z) {
      z_wires[m] = o.terms[0].ops[0].first;
      z_coeffs[m] = o.terms[0].coeff;
    } else {
      fast = false;
    }
  }

  parallel_for(B, [&](int, size_t begin, size_t end) {
    for (size_t r = begin; r < end; ++r) {
      StateVector psi =
          run_program(spec, program, theta.value, &x.data[r * x.cols]);
      if (cache) last_states[r] = psi;
      if (noisy) {
        Rng row_rng =
            noise_rng->split(uint64_t(layer_id)).split(uint64_t(r));
        inject_measurement_noise(psi, spec.noise_bound, row_rng);
      }
      if (fast) {
        expectations_all_z(psi, z_wires, &y.data[r * M]);
        for (size_t m = 0; m < M; ++m) y(r, m) *= z_coeffs[m];
      } else {
        for (size_t m = 0; m < M; ++m)
          y(r, m) = expectation(psi, spec.observables[m]);
      }
    }
  });
  return y;
}

Matrix QuantumLayer::backward(const Matrix& dout) {
  const Matrix& x = last_x;
  if (last_states.size() != dout.rows || x.rows != dout.rows)
    throw std::logic_error("QuantumLayer::backward without a train forward");
  Matrix dx(x.rows, spec.num_features);
  const int workers = std::max(1, get_num_threads());
  if (workers == 1) {
    for (size_t r = 0; r < x.rows; ++r)
      circuit_vjp(spec, program, theta.value, &x.data[r * x.cols],
                  &dout.data[r * dout.cols], theta.grad.data(),
                  &dx.data[r * dx.cols], &last_states[r]);
    return dx;
  }
  // per-worker gradient buffers, reduced in worker order so the sum does
  // not depend on scheduling
  std::vector<std::vector<double>> partial(
      size_t(workers), std::vector<double>(theta.value.size(), 0.0));
  parallel_for(x.rows, [&](int tid, size_t begin, size_t end) {
    for (size_t r = begin; r < end; ++r)
      circuit_vjp(spec, program, theta.value, &x.data[r * x.cols],
                  &dout.data[r * dout.cols], partial[size_t(tid)].data(),
                  &dx.data[r * dx.cols], &last_states[r]);
  });
  for (const auto& buf : partial)
    for (size_t i = 0; i < buf.size(); ++i) theta.grad[i] += buf[i];
  return dx;
}

Matrix LayerStack::forward(const Matrix& x, Mode mode, Rng* noise_rng) {
  Matrix cur = x;
  for (size_t i = 0; i < layers.size(); ++i) {
    try {
      cur = layers[i]->forward(cur, mode, noise_rng);
    } catch (const std::exception& e) {
      throw std::invalid_argument("layer " + std::to_string(i) + " (" +
                                  layers[i]->kind() + "): " + e.what());
    }
  }
  return cur;
}

Matrix LayerStack::backward(const Matrix& dout) {
  Matrix cur = dout;
  for (size_t i = layers.size(); i-- > 0;) {
    try {
      cur = layers[i]->backward(cur);
    } catch (const std::exception& e) {
      throw std::invalid_argument("layer " + std::to_string(i) + " (" +
                                  layers[i]->kind() + "): " + e.what());
    }
  }
  return cur;
}

std::vector<ParamBlock*> LayerStack::params() {
  std::vector<ParamBlock*> out;
  for (auto& l : layers)
    for (ParamBlock* p : l->params()) out.push_back(p);
  return out;
}

std::vector<std::vector<double>*> LayerStack::state() {
  std::vector<std::vector<double>*> out;
  for (auto& l : layers)
    for (auto* s : l->state()) out.push_back(s);
  return out;
}

void LayerStack::zero_grads() {
  for (ParamBlock* p : params()) p->zero_grad();
}

size_t LayerStack::num_params() {
  size_t n = 0;
  for (ParamBlock* p : params()) n += p->value.size();
  return n;
}

double mse(const Matrix& pred, const Matrix& target) {
  if (pred.rows != target.rows || pred.cols != target.cols)
    throw std::invalid_argument("mse: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < pred.data.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    s += d * d;
  }
  return s / double(pred.rows);
}

Matrix mse_grad(const Matrix& pred, const Matrix& target) {
  Matrix g(pred.rows, pred.cols);
  for (size_t i = 0; i < pred.data.size(); ++i)
    g.data[i] = 2.0 * (pred.data[i] - target.data[i]) / double(pred.rows);
  return g;
}

}  // namespace qiren
