#pragma once

#include <memory>
#include <string>

#include "mmdiff/core/config.hpp"
#include "mmdiff/denoise/coupled.hpp"
#include "mmdiff/denoise/denoiser.hpp"
#include "mmdiff/denoise/gmm.hpp"
#include "mmdiff/denoise/table.hpp"

namespace mmdiff::denoise {

// Model files use the sectioned key-value config format with a [model]
// section whose `kind` selects the payload:
//
//   [model]
//   kind = gaussian_mixture        # or discrete_table, coupled_toy
//
//   [gaussian_mixture]
//   weights = 0.5, 0.5
//   sigma0 = 0.5
//   mean_0 = -2.0
//   mean_1 = 2.0
//
//   [discrete_table]
//   length = 2
//   vocab = 2
//   probs = 0.5, 0.25, 0.25, 0     # lexicographic, position 0 leading
//
//   [coupled_toy]
//   weights / sigma0 / mean_k as above
//   length = 3
//   vocab = 2
//   component_position = 0
//   table_<component>_<position> = 0.7, 0.3   # one row per entry
GaussianMixture parse_gaussian_mixture(const Config& cfg);
DiscreteTable parse_discrete_table(const Config& cfg);
CoupledToyModel parse_coupled_toy(const Config& cfg);

Config to_config(const GaussianMixture& model);
Config to_config(const DiscreteTable& model);
Config to_config(const CoupledToyModel& model);

std::string model_kind(const Config& cfg);
std::unique_ptr<Denoiser> load_denoiser(const Config& cfg);
std::unique_ptr<Denoiser> load_denoiser_file(const std::string& path);

}  // namespace mmdiff::denoise
