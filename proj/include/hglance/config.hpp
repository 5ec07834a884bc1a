#ifndef HGLANCE_CONFIG_HPP_
#define HGLANCE_CONFIG_HPP_

#include <string>

#include "hglance/trainer.hpp"

namespace hglance {

// Applies one `key = value` assignment; `where` names the source for error
// messages ("line 3", "flag --steps"). Throws UnknownKey / TypeError /
// RangeError.
void apply_config_entry(TrainConfig& cfg, const std::string& key,
                        const std::string& value, const std::string& where);

// Cross-field checks run after all entries are applied.
void validate_config(const TrainConfig& cfg);

// UTF-8 `key = value` lines with `#` comments; unknown keys rejected.
TrainConfig parse_config_text(const std::string& text);
TrainConfig parse_config_file(const std::string& path);

// Deterministic, re-parseable echo of every key (the run manifest body).
std::string config_to_text(const TrainConfig& cfg);

// HGLANCE_THREADS resolved to a thread cap (0 = single-threaded).
int threads_from_env();

}  // namespace hglance

#endif  // HGLANCE_CONFIG_HPP_
