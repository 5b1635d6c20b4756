#include "qiren/model/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace qiren {

uint32_t crc32_ieee(const uint8_t* data, size_t len) {
  static const std::array<uint32_t, 256> table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  uint32_t crc = 0xffffffffu;
  for (size_t i = 0; i < len; ++i)
    crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
  return crc ^ 0xffffffffu;
}

using nlohmann::json;

std::string model_config_to_json(const ModelConfig& cfg) {
  json j;
  j["family"] = family_name(cfg.family);
  j["in_dim"] = cfg.in_dim;
  j["out_dim"] = cfg.out_dim;
  j["hidden"] = cfg.hidden;
  j["depth"] = cfg.depth;
  j["qubits"] = cfg.qubits;
  j["reuploads"] = cfg.reuploads;
  j["blocks"] = cfg.blocks;
  j["entangler"] = cfg.entangler == Entangler::CNOT ? "cnot" : "cz";
  j["noise_bound"] = cfg.noise_bound;
  j["batchnorm"] = cfg.batchnorm;
  j["rff_freqs"] = cfg.rff_freqs;
  j["rff_sigma"] = cfg.rff_sigma;
  j["omega0"] = cfg.omega0;
  return j.dump();  // keys come out sorted: canonical text
}

ModelConfig model_config_from_json(const std::string& text) {
  json j = json::parse(text);
  ModelConfig c;
  c.family = family_from_name(j.at("family").get<std::string>());
  c.in_dim = j.at("in_dim").get<int>();
  c.out_dim = j.at("out_dim").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.depth = j.at("depth").get<int>();
  c.qubits = j.at("qubits").get<int>();
  c.reuploads = j.at("reuploads").get<int>();
  c.blocks = j.at("blocks").get<int>();
  const std::string ent = j.at("entangler").get<std::string>();
  if (ent == "cnot") c.entangler = Entangler::CNOT;
  else if (ent == "cz") c.entangler = Entangler::CZ;
  else throw std::invalid_argument("unknown entangler: " + ent);
  c.noise_bound = j.at("noise_bound").get<double>();
  c.batchnorm = j.at("batchnorm").get<bool>();
  c.rff_freqs = j.at("rff_freqs").get<int>();
  c.rff_sigma = j.at("rff_sigma").get<double>();
  c.omega0 = j.at("omega0").get<double>();
  c.validate();
  return c;
}

namespace {

void put_u32(std::vector<uint8_t>& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(uint8_t(v >> (8 * i)));
}
void put_u64(std::vector<uint8_t>& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(uint8_t(v >> (8 * i)));
}
void put_f64(std::vector<uint8_t>& buf, double d) {
  uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(buf, v);
}

struct Reader {
  const std::vector<uint8_t>& buf;
  size_t pos = 0;
  void need(size_t n) const {
    if (pos + n > buf.size())
      throw std::runtime_error("checkpoint truncated");
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(buf[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(buf[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() {
    uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
};

}  // namespace

void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                     LayerStack& model, const Adam* opt) {
  const auto blocks = model.params();
  const auto state = model.state();
  uint64_t trainable = 0, state_count = 0;
  for (ParamBlock* b : blocks) trainable += b->value.size();
  for (auto* s : state) state_count += s->size();

  json header;
  header["config"] = json::parse(model_config_to_json(cfg));
  header["optimizer"] = opt != nullptr;
  header["state_count"] = state_count;
  header["trainable_count"] = trainable;
  const std::string htext = header.dump();

  std::vector<uint8_t> buf;
  buf.insert(buf.end(), {'Q', 'I', 'R', 'N'});
  put_u32(buf, 1);
  put_u32(buf, uint32_t(htext.size()));
  buf.insert(buf.end(), htext.begin(), htext.end());
  put_u64(buf, trainable + state_count);
  for (ParamBlock* b : blocks)
    for (double v : b->value) put_f64(buf, v);
  for (auto* s : state)
    for (double v : *s) put_f64(buf, v);
  if (opt) {
    if (opt->slots.size() != blocks.size())
      throw std::logic_error("optimizer does not match model");
    put_u64(buf, uint64_t(opt->t));
    for (size_t k = 0; k < blocks.size(); ++k) {
      for (double v : opt->slots[k].m) put_f64(buf, v);
      for (double v : opt->slots[k].v) put_f64(buf, v);
    }
  }
  put_u32(buf, crc32_ieee(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  if (buf.size() < 16) throw std::runtime_error("checkpoint truncated");

  const uint32_t stored_crc =
      uint32_t(buf[buf.size() - 4]) | uint32_t(buf[buf.size() - 3]) << 8 |
      uint32_t(buf[buf.size() - 2]) << 16 | uint32_t(buf[buf.size() - 1]) << 24;
  if (crc32_ieee(buf.data(), buf.size() - 4) != stored_crc)
    throw std::runtime_error("checkpoint CRC mismatch");

  Reader r{buf};
  r.need(4);
  if (std::memcmp(buf.data(), "QIRN", 4) != 0)
    throw std::runtime_error("not a model checkpoint");
  r.pos = 4;
  const uint32_t version = r.u32();
  if (version != 1)
    throw std::runtime_error("unsupported checkpoint version");
  const uint32_t hlen = r.u32();
  r.need(hlen);
  const std::string htext(buf.begin() + std::ptrdiff_t(r.pos),
                          buf.begin() + std::ptrdiff_t(r.pos + hlen));
  r.pos += hlen;
  json header = json::parse(htext);

  LoadedCheckpoint out;
  out.config = model_config_from_json(header.at("config").dump());
  out.has_optimizer = header.at("optimizer").get<bool>();
  const uint64_t want_trainable = header.at("trainable_count").get<uint64_t>();
  const uint64_t want_state = header.at("state_count").get<uint64_t>();

  Rng dummy(0);
  out.model = build_model(out.config, dummy);
  const auto blocks = out.model.params();
  const auto state = out.model.state();
  uint64_t trainable = 0, state_count = 0;
  for (ParamBlock* b : blocks) trainable += b->value.size();
  for (auto* s : state) state_count += s->size();
  if (trainable != want_trainable || state_count != want_state)
    throw std::runtime_error("checkpoint does not match its own config");

  const uint64_t total = r.u64();
  if (total != trainable + state_count)
    throw std::runtime_error("checkpoint value count mismatch");
  for (ParamBlock* b : blocks)
    for (double& v : b->value) v = r.f64();
  for (auto* s : state)
    for (double& v : *s) v = r.f64();
  if (out.has_optimizer) {
    out.opt.init(blocks);
    out.opt.t = (long long)r.u64();
    for (size_t k = 0; k < blocks.size(); ++k) {
      for (double& v : out.opt.slots[k].m) v = r.f64();
      for (double& v : out.opt.slots[k].v) v = r.f64();
    }
  }
  if (r.pos != buf.size() - 4)
    throw std::runtime_error("checkpoint has trailing bytes");
  return out;
}

}  // namespace qiren
