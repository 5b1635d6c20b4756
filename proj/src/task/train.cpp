#include "qiren/task/train.hpp"

#include <chrono>
#include <cmath>

#include "json.hpp"

#include "qiren/model/checkpoint.hpp"
#include "qiren/util/parallel.hpp"

namespace qiren {

using json = nlohmann::json;

std::string TrainReport::to_json(bool include_wall_time) const {
  json j;
  j["config"] = json::parse(model_config_to_json(config));
  j["final_mse"] = final_mse;
  j["loss_curve"] = loss_curve;
  j["mem_saving_pct"] = mem_saving_pct;
  j["params"] = params;
  j["seed"] = seed;
  if (include_wall_time) j["wall_seconds"] = wall_seconds;
  return j.dump();
}

double eval_mse(LayerStack& model, const Dataset& ds, Rng* noise_rng) {
  const Matrix pred = model.forward(ds.x, Mode::Eval, noise_rng);
  return mse(pred, ds.y);
}

TrainResult train_once(const ModelConfig& cfg, const Dataset& ds,
                       const TrainOptions& opt) {
  cfg.validate();
  if (ds.size() == 0) throw std::invalid_argument("empty dataset");
  if (int(ds.x.cols) != cfg.in_dim || int(ds.y.cols) != cfg.out_dim)
    throw std::invalid_argument("dataset shape does not match the model");
  set_num_threads(opt.threads);

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(opt.seed);
  TrainResult res;
  // measurement noise perturbs evaluation only; the trained function and its
  // gradients are noiseless, so the bound is stripped for the whole fit
  ModelConfig fit_cfg = cfg;
  fit_cfg.noise_bound = 0.0;
  res.model = build_model(fit_cfg, rng);
  res.opt.init(res.model.params());

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    const Matrix pred = res.model.forward(ds.x, Mode::Train, nullptr);
    const double loss = mse(pred, ds.y);
    if (!std::isfinite(loss))
      throw TrainAbort(epoch, "loss is not finite at epoch " +
                                  std::to_string(epoch));
    res.report.loss_curve.push_back(loss);
    res.model.zero_grads();
    res.model.backward(mse_grad(pred, ds.y));
    try {
      res.opt.step(res.model.params(), opt.lr_classical, opt.lr_quantum);
    } catch (const std::exception& e) {
      throw TrainAbort(epoch, e.what());
    }
  }

  if (cfg.noise_bound > 0.0)
    for (auto& l : res.model.layers)
      if (auto* q = dynamic_cast<QuantumLayer*>(l.get()))
        q->spec.noise_bound = cfg.noise_bound;
  Rng noise_rng = rng.split("eval_noise");
  res.report.final_mse = eval_mse(
      res.model, ds, cfg.noise_bound > 0.0 ? &noise_rng : nullptr);
  res.report.seed = opt.seed;
  res.report.config = cfg;
  res.report.params = count_params(cfg);
  res.report.mem_saving_pct =
      memory_saving_pct(res.report.params, ds.scalar_count());
  res.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

SeedSweep train_best_of(const ModelConfig& cfg, const Dataset& ds,
                        const TrainOptions& opt, int count) {
  if (count < 1) throw std::invalid_argument("need at least one seed");
  SeedSweep sweep;
  for (int i = 0; i < count; ++i) {
    TrainOptions o = opt;
    o.seed = opt.seed + uint64_t(i);
    TrainResult r = train_once(cfg, ds, o);
    sweep.reports.push_back(r.report);
    if (i == 0 || r.report.final_mse < sweep.best.report.final_mse) {
      sweep.best_index = size_t(i);
      sweep.best = std::move(r);
    }
  }
  return sweep;
}

}  // namespace qiren
