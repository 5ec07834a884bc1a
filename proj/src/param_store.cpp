#include "hglance/param_store.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "hglance/errors.hpp"

namespace hglance {

Tensor& ParameterStore::add(const std::string& name, Tensor init, bool trainable) {
  if (entries_.count(name)) throw Error("duplicate parameter name: " + name);
  Entry e;
  e.grad = Tensor::zeros(init.shape);
  e.m = Tensor::zeros(init.shape);
  e.v = Tensor::zeros(init.shape);
  e.value = std::move(init);
  e.trainable = trainable;
  return entries_.emplace(name, std::move(e)).first->second.value;
}

ParameterStore::Entry& ParameterStore::entry(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error("unknown parameter: " + name);
  return it->second;
}

const ParameterStore::Entry& ParameterStore::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error("unknown parameter: " + name);
  return it->second;
}

void ParameterStore::zero_grads() {
  for (auto& [name, e] : entries_)
    std::fill(e.grad.data.begin(), e.grad.data.end(), 0.0);
}

std::vector<std::string> ParameterStore::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

std::size_t ParameterStore::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, e] : entries_)
    if (e.trainable) n += e.value.size();
  return n;
}

namespace {

constexpr char kMagic[4] = {'H', 'G', 'L', 'C'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size()) throw ChecksumMismatch("checkpoint truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
};

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

void put_entry(std::string& out, const std::string& name, const Tensor& t) {
  put_u32(out, static_cast<std::uint32_t>(name.size()));
  out.append(name);
  put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
  for (std::size_t d : t.shape) put_u64(out, d);
  for (double v : t.data) put_f64(out, v);
}

}  // namespace

std::string checkpoint_bytes(const ParameterStore& store) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);

  std::uint32_t count = 1;  // __opt.step
  for (const auto& [name, e] : store) count += e.trainable ? 3 : 1;
  put_u32(out, count);

  put_entry(out, "__opt.step", Tensor::scalar(static_cast<double>(store.opt_step)));
  for (const auto& [name, e] : store) {
    put_entry(out, name, e.value);
    if (e.trainable) {
      put_entry(out, name + "#m", e.m);
      put_entry(out, name + "#v", e.v);
    }
  }
  put_u64(out, fnv1a64(out));
  return out;
}

void save_checkpoint(const ParameterStore& store, const std::string& path) {
  const std::string bytes = checkpoint_bytes(store);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open for write: " + tmp);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

ParameterStore load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open checkpoint: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  if (buf.size() < 8 + 12) throw ChecksumMismatch("checkpoint too short: " + path);
  const std::string body = buf.substr(0, buf.size() - 8);
  Reader tail{buf, buf.size() - 8};
  if (tail.u64() != fnv1a64(body))
    throw ChecksumMismatch("checkpoint checksum mismatch: " + path);

  Reader r{body};
  if (r.bytes(4) != std::string(kMagic, 4)) throw ChecksumMismatch("bad checkpoint magic");
  if (r.u32() != kVersion) throw ChecksumMismatch("unsupported checkpoint version");
  const std::uint32_t count = r.u32();

  struct Raw {
    std::string name;
    Tensor t;
  };
  std::vector<Raw> raws;
  raws.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = r.u32();
    std::string name = r.bytes(name_len);
    const std::uint32_t rank = r.u32();
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(r.u64());
    std::vector<double> data(shape_product(shape));
    for (auto& v : data) v = r.f64();
    raws.push_back({std::move(name), Tensor(std::move(shape), std::move(data))});
  }
  if (r.pos != body.size()) throw ChecksumMismatch("trailing bytes in checkpoint");

  ParameterStore store;
  for (auto& raw : raws) {
    if (raw.name == "__opt.step") {
      store.opt_step = static_cast<std::int64_t>(raw.t.data.at(0));
    } else if (raw.name.size() > 2 && raw.name.substr(raw.name.size() - 2) == "#m") {
      store.entry(raw.name.substr(0, raw.name.size() - 2)).m = std::move(raw.t);
    } else if (raw.name.size() > 2 && raw.name.substr(raw.name.size() - 2) == "#v") {
      store.entry(raw.name.substr(0, raw.name.size() - 2)).v = std::move(raw.t);
    } else {
      const bool trainable = raw.name.rfind("__", 0) != 0;
      store.add(raw.name, std::move(raw.t), trainable);
    }
  }
  return store;
}

}  // namespace hglance
