// command line front end: train coordinate networks, resample images,
// dump spectra, sweep ablations, run self checks.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qiren/model/checkpoint.hpp"
#include "qiren/spectrum/spectrum.hpp"
#include "qiren/task/ablate.hpp"
#include "qiren/task/superres.hpp"
#include "qiren/task/train.hpp"
#include "qiren/task/verify.hpp"
#include "qiren/util/parallel.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace qiren;

namespace {

// one resolved run; architecture fields stay unset unless the user spoke,
// so family defaults survive
struct RunConfig {
  std::string family = "qiren";
  std::string data = "twotone";
  int epochs = 300;
  int seeds = 1;
  uint64_t seed = 0;
  double lr = 2e-3;  // circuit blocks always step 10x faster
  double cutoff = 0.25;
  int factor = 2;
  int threads = 1;
  std::string out = "out";
  std::optional<int> qubits, reuploads, blocks;
  std::optional<std::string> entangler;
  std::optional<double> noise;
  std::optional<bool> batchnorm;
};

json run_config_to_json(const RunConfig& rc) {
  json j;
  j["family"] = rc.family;
  j["data"] = rc.data;
  j["epochs"] = rc.epochs;
  j["seeds"] = rc.seeds;
  j["seed"] = rc.seed;
  j["lr"] = rc.lr;
  j["cutoff"] = rc.cutoff;
  j["factor"] = rc.factor;
  j["threads"] = rc.threads;
  j["out"] = rc.out;
  if (rc.qubits) j["qubits"] = *rc.qubits;
  if (rc.reuploads) j["reuploads"] = *rc.reuploads;
  if (rc.blocks) j["blocks"] = *rc.blocks;
  if (rc.entangler) j["entangler"] = *rc.entangler;
  if (rc.noise) j["noise"] = *rc.noise;
  if (rc.batchnorm) j["batchnorm"] = *rc.batchnorm;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  static const char* known[] = {"family",    "data",   "epochs", "seeds",
                                "seed",      "lr",     "cutoff", "factor",
                                "threads",   "out",    "qubits", "reuploads",
                                "blocks",    "entangler", "noise", "batchnorm"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("unknown config key '" + it.key() + "'");
  }
  RunConfig rc;
  if (j.contains("family")) rc.family = j["family"].get<std::string>();
  if (j.contains("data")) rc.data = j["data"].get<std::string>();
  if (j.contains("epochs")) rc.epochs = j["epochs"].get<int>();
  if (j.contains("seeds")) rc.seeds = j["seeds"].get<int>();
  if (j.contains("seed")) rc.seed = j["seed"].get<uint64_t>();
  if (j.contains("lr")) rc.lr = j["lr"].get<double>();
  if (j.contains("cutoff")) rc.cutoff = j["cutoff"].get<double>();
  if (j.contains("factor")) rc.factor = j["factor"].get<int>();
  if (j.contains("threads")) rc.threads = j["threads"].get<int>();
  if (j.contains("out")) rc.out = j["out"].get<std::string>();
  if (j.contains("qubits")) rc.qubits = j["qubits"].get<int>();
  if (j.contains("reuploads")) rc.reuploads = j["reuploads"].get<int>();
  if (j.contains("blocks")) rc.blocks = j["blocks"].get<int>();
  if (j.contains("entangler")) rc.entangler = j["entangler"].get<std::string>();
  if (j.contains("noise")) rc.noise = j["noise"].get<double>();
  if (j.contains("batchnorm")) rc.batchnorm = j["batchnorm"].get<bool>();

  family_from_name(rc.family);  // throws on junk
  if (rc.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (rc.seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  if (!(rc.lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(rc.cutoff > 0.0 && rc.cutoff < 1.0))
    throw std::invalid_argument("cutoff must be in (0,1)");
  if (rc.factor < 1) throw std::invalid_argument("factor must be >= 1");
  if (rc.threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (rc.entangler && *rc.entangler != "cnot" && *rc.entangler != "cz")
    throw std::invalid_argument("entangler must be cnot or cz");
  if (rc.noise && *rc.noise < 0.0)
    throw std::invalid_argument("noise must be >= 0");
  return rc;
}

// everything the user typed, kept separate so config files slot in between
// defaults and flags
struct CliCapture {
  std::optional<std::string> family, data, entangler, out;
  std::optional<int> epochs, seeds, factor, threads, qubits, reuploads, blocks;
  std::optional<uint64_t> seed;
  std::optional<double> lr, noise, cutoff;
  bool batchnorm_value = true;
  std::string config_path, checkpoint;
};

void add_common_options(CLI::App* sub, CliCapture& cap) {
  sub->add_option("--family", cap.family,
                  "qiren | pure_quantum | relu | tanh | relu_rff | siren");
  sub->add_option("--data", cap.data,
                  "dataset: 'twotone', a .wav/.csv sound, or a .pgm image");
  sub->add_option("--epochs", cap.epochs, "training epochs");
  sub->add_option("--seeds", cap.seeds, "number of seeds, keep the best");
  sub->add_option("--seed", cap.seed, "base rng seed (env QIREN_SEED)");
  sub->add_option("--lr", cap.lr, "classical learning rate; circuits get 10x");
  sub->add_option("--qubits", cap.qubits, "wires per circuit");
  sub->add_option("--reuploads", cap.reuploads, "encoding repetitions L");
  sub->add_option("--blocks", cap.blocks, "variational rounds K");
  sub->add_option("--entangler", cap.entangler, "cnot | cz");
  sub->add_option("--noise", cap.noise, "measurement noise bound (radians)");
  sub->add_flag("--batchnorm,!--no-batchnorm", cap.batchnorm_value,
                "batch norm in hybrid/MLP models");
  sub->add_option("--cutoff", cap.cutoff,
                  "band split point as a fraction of Nyquist");
  sub->add_option("--factor", cap.factor, "upsampling factor");
  sub->add_option("--out", cap.out, "output directory");
  sub->add_option("--threads", cap.threads, "worker threads (0 = hardware)");
  sub->add_option("--config", cap.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
}

json capture_to_json(const CliCapture& cap, const CLI::App* sub) {
  json j;
  if (cap.family) j["family"] = *cap.family;
  if (cap.data) j["data"] = *cap.data;
  if (cap.epochs) j["epochs"] = *cap.epochs;
  if (cap.seeds) j["seeds"] = *cap.seeds;
  if (cap.seed) j["seed"] = *cap.seed;
  if (cap.lr) j["lr"] = *cap.lr;
  if (cap.cutoff) j["cutoff"] = *cap.cutoff;
  if (cap.factor) j["factor"] = *cap.factor;
  if (cap.threads) j["threads"] = *cap.threads;
  if (cap.out) j["out"] = *cap.out;
  if (cap.qubits) j["qubits"] = *cap.qubits;
  if (cap.reuploads) j["reuploads"] = *cap.reuploads;
  if (cap.blocks) j["blocks"] = *cap.blocks;
  if (cap.entangler) j["entangler"] = *cap.entangler;
  if (cap.noise) j["noise"] = *cap.noise;
  if (sub->count("--batchnorm")) j["batchnorm"] = cap.batchnorm_value;
  return j;
}

RunConfig resolve(const CliCapture& cap, const CLI::App* sub) {
  json merged = run_config_to_json(RunConfig{});
  if (const char* env = std::getenv("QIREN_SEED")) {
    try {
      size_t used = 0;
      merged["seed"] = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("");
    } catch (...) {
      throw std::invalid_argument("QIREN_SEED is not an unsigned integer");
    }
  }
  if (!cap.config_path.empty()) {
    std::ifstream in(cap.config_path);
    json fj = json::parse(in);
    run_config_from_json(fj);  // key/type/range validation
    merged.update(fj);
  }
  merged.update(capture_to_json(cap, sub));
  return run_config_from_json(merged);
}

ModelConfig to_model_config(const RunConfig& rc, int in_dim, int out_dim) {
  ModelConfig mc =
      ModelConfig::defaults(family_from_name(rc.family), in_dim, out_dim);
  if (rc.qubits) {
    mc.qubits = *rc.qubits;
    if (mc.family == Family::Qiren) mc.hidden = *rc.qubits;
  }
  if (rc.reuploads) mc.reuploads = *rc.reuploads;
  if (rc.blocks) mc.blocks = *rc.blocks;
  if (rc.entangler)
    mc.entangler = *rc.entangler == "cz" ? Entangler::CZ : Entangler::CNOT;
  if (rc.noise) mc.noise_bound = *rc.noise;
  if (rc.batchnorm) mc.batchnorm = *rc.batchnorm;
  mc.validate();
  return mc;
}

TrainOptions to_train_options(const RunConfig& rc) {
  TrainOptions o;
  o.epochs = rc.epochs;
  o.lr_classical = rc.lr;
  o.lr_quantum = 10.0 * rc.lr;
  o.seed = rc.seed;
  o.threads = rc.threads;
  return o;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::vector<double> y_column(const Dataset& ds) {
  std::vector<double> y(ds.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = ds.y(i, 0);
  return y;
}

int cmd_train(const RunConfig& rc) {
  const Dataset ds = load_dataset(rc.data);
  const ModelConfig mc =
      to_model_config(rc, int(ds.x.cols), int(ds.y.cols));
  const TrainOptions opt = to_train_options(rc);
  fs::create_directories(rc.out);

  std::cerr << "training " << family_name(mc.family) << " on " << rc.data
            << " (" << ds.size() << " samples, " << count_params(mc)
            << " params, " << rc.seeds << " seed"
            << (rc.seeds > 1 ? "s" : "") << ")\n";
  SeedSweep sweep = train_best_of(mc, ds, opt, rc.seeds);
  for (size_t i = 0; i < sweep.reports.size(); ++i) {
    const TrainReport& r = sweep.reports[i];
    std::cerr << "seed " << r.seed << ": final mse " << r.final_mse << " ("
              << r.wall_seconds << " s)"
              << (i == sweep.best_index ? "  <- best" : "") << "\n";
  }

  const fs::path out(rc.out);
  const std::string report = sweep.best.report.to_json(false);
  write_text(out / "report.json", report + "\n");
  csv_write_column((out / "loss.csv").string(),
                   sweep.best.report.loss_curve);
  save_checkpoint((out / "model.bin").string(), mc, sweep.best.model,
                  &sweep.best.opt);
  json seeds_j;
  seeds_j["best_index"] = sweep.best_index;
  json arr = json::array();
  for (const TrainReport& r : sweep.reports)
    arr.push_back(json::parse(r.to_json(false)));
  seeds_j["reports"] = arr;
  write_text(out / "seeds.json", seeds_j.dump() + "\n");
  write_text(out / "run_config.json",
             run_config_to_json(rc).dump() + "\n");

  std::cout << report << "\n";
  return 0;
}

int cmd_superres(const RunConfig& rc, const std::string& checkpoint) {
  if (checkpoint.empty())
    throw std::invalid_argument("superres needs --checkpoint");
  LoadedCheckpoint ckpt = load_checkpoint(checkpoint);
  const Dataset ds = load_dataset(rc.data);
  if (!ds.is_image())
    throw std::invalid_argument("superres needs an image dataset");
  set_num_threads(rc.threads);
  fs::create_directories(rc.out);
  const fs::path out(rc.out);

  Rng noise_rng = Rng(rc.seed).split("eval_noise");
  GridPrediction model_up = superresolve(
      ckpt.model, ckpt.config, ds.grid_w, ds.grid_h, rc.factor,
      ckpt.config.noise_bound > 0.0 ? &noise_rng : nullptr);
  pgm_write((out / "superres.pgm").string(), model_up.width, model_up.height,
            model_up.values);

  GridPrediction src{ds.grid_w, ds.grid_h, y_column(ds)};
  const GridPrediction near = interp_nearest_2d(src, rc.factor);
  const GridPrediction bilin = interp_bilinear_2d(src, rc.factor);
  pgm_write((out / "nearest.pgm").string(), near.width, near.height,
            near.values);
  pgm_write((out / "bilinear.pgm").string(), bilin.width, bilin.height,
            bilin.values);
  std::cerr << "wrote " << model_up.width << "x" << model_up.height
            << " grids to " << rc.out << "\n";
  return 0;
}

int cmd_spectrum(const RunConfig& rc, const std::string& checkpoint) {
  const Dataset ds = load_dataset(rc.data);
  if (ds.is_image())
    throw std::invalid_argument("spectrum dumps need a 1-D signal");
  fs::create_directories(rc.out);
  const fs::path out(rc.out);

  const std::vector<double> target = y_column(ds);
  write_spectrum_csv((out / "signal_spectrum.csv").string(),
                     real_spectrum(target), true);
  if (!checkpoint.empty()) {
    LoadedCheckpoint ckpt = load_checkpoint(checkpoint);
    set_num_threads(rc.threads);
    write_spectrum_csv((out / "model_spectrum.csv").string(),
                       model_output_spectrum(ckpt.model, ds), true);
    const Matrix pred = ckpt.model.forward(ds.x, Mode::Eval, nullptr);
    std::vector<double> p(ds.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = pred(i, 0);
    const int cutoff_bin = int(rc.cutoff * double(ds.size() / 2));
    const BandErrors be = band_error_decomposition(p, target, cutoff_bin);
    json bj;
    bj["cutoff_fraction"] = rc.cutoff;
    bj["cutoff_bin"] = cutoff_bin;
    bj["total"] = be.total;
    bj["low"] = be.low;
    bj["high"] = be.high;
    bj["cross"] = be.cross;
    write_text(out / "bands.json", bj.dump() + "\n");
  }
  std::cerr << "wrote spectrum csv to " << rc.out << "\n";
  return 0;
}

int cmd_ablate(const RunConfig& rc) {
  const Dataset ds = load_dataset(rc.data);
  const ModelConfig base =
      to_model_config(rc, int(ds.x.cols), int(ds.y.cols));
  const TrainOptions opt = to_train_options(rc);
  fs::create_directories(rc.out);

  std::vector<AblationResult> rows;
  for (const AblationCell& cell : ablation_cells(base)) {
    AblationResult r;
    r.cell = cell;
    try {
      r.report = train_once(cell.config, ds, opt).report;
      r.ok = true;
      std::cerr << cell.axis << "=" << cell.value << ": mse "
                << r.report.final_mse << "\n";
    } catch (const std::exception& e) {
      r.error = e.what();
      std::cerr << cell.axis << "=" << cell.value << ": failed: " << e.what()
                << "\n";
    }
    rows.push_back(std::move(r));
  }
  write_ablation_csv((fs::path(rc.out) / "ablation.csv").string(), rows);
  return 0;
}

int cmd_verify() {
  const std::vector<Check> checks = run_self_checks();
  bool all = true;
  for (const Check& c : checks) {
    all = all && c.pass;
    std::cout << (c.pass ? "ok   " : "FAIL ") << c.name << " — " << c.detail
              << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinate networks with quantum-circuit feature maps"};
  app.require_subcommand(1);
  CliCapture cap;

  CLI::App* train = app.add_subcommand("train", "fit a model to a signal");
  CLI::App* superres =
      app.add_subcommand("superres", "upsample an image with a trained model");
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "dump signal and model spectra");
  CLI::App* ablate =
      app.add_subcommand("ablate", "one-axis-at-a-time config sweep");
  app.add_subcommand("verify", "run built-in cross checks");
  for (CLI::App* sub : {train, superres, spectrum, ablate})
    add_common_options(sub, cap);
  superres->add_option("--checkpoint", cap.checkpoint, "trained model file")
      ->check(CLI::ExistingFile);
  spectrum->add_option("--checkpoint", cap.checkpoint, "trained model file")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    if (sub->get_name() == "verify") return cmd_verify();
    const RunConfig rc = resolve(cap, sub);
    if (sub->get_name() == "train") return cmd_train(rc);
    if (sub->get_name() == "superres") return cmd_superres(rc, cap.checkpoint);
    if (sub->get_name() == "spectrum") return cmd_spectrum(rc, cap.checkpoint);
    if (sub->get_name() == "ablate") return cmd_ablate(rc);
    return 1;
  } catch (const TrainAbort& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
