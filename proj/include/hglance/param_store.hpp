#ifndef HGLANCE_PARAM_STORE_HPP_
#define HGLANCE_PARAM_STORE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hglance/tensor.hpp"

namespace hglance {

// Named parameter tensors with paired gradient buffers and Adam moment
// buffers. Entries marked non-trainable (metadata scalars) are skipped by the
// optimizer but still round-trip through checkpoints.
class ParameterStore {
 public:
  struct Entry {
    Tensor value;
    Tensor grad;
    Tensor m;
    Tensor v;
    bool trainable = true;
  };

  Tensor& add(const std::string& name, Tensor init, bool trainable = true);
  bool has(const std::string& name) const { return entries_.count(name) != 0; }
  Entry& entry(const std::string& name);
  const Entry& entry(const std::string& name) const;
  Tensor& value(const std::string& name) { return entry(name).value; }
  const Tensor& value(const std::string& name) const { return entry(name).value; }
  Tensor& grad(const std::string& name) { return entry(name).grad; }

  void zero_grads();
  std::vector<std::string> names() const;
  std::size_t parameter_count() const;  // trainable scalars

  std::int64_t opt_step = 0;  // Adam time step, persisted in checkpoints

  // Deterministic iteration (std::map keeps names sorted).
  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::map<std::string, Entry> entries_;
};

// Checkpoint file: magic "HGLC", u32 version, u32 entry count, then per entry
// u32 name length + name bytes + u32 rank + u64 dims + little-endian IEEE754
// doubles. Adam moment buffers ride along as "<name>#m" / "<name>#v" entries
// and the optimizer step as "__opt.step". An FNV-1a64 checksum of everything
// before it closes the file.
void save_checkpoint(const ParameterStore& store, const std::string& path);
ParameterStore load_checkpoint(const std::string& path);

// Serialized image of the checkpoint (used for byte-identity checks).
std::string checkpoint_bytes(const ParameterStore& store);

}  // namespace hglance

#endif  // HGLANCE_PARAM_STORE_HPP_
