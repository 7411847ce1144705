#pragma once

#include <string>
#include <vector>

#include "bdris/ris_config.hpp"
#include "bdris/rng.hpp"
#include "bdris/scattering.hpp"

namespace bdris {

// Propagation scenario around the surface. Distances in meters, powers in
// watts, frequency in Hz, Rician factor linear.
struct SceneConfig {
  int N = 4;
  int K = 4;
  double carrier_frequency = 2.4e9;
  double d_tx_ris = 100.0;
  double d_ris_user = 10.0;
  double rician_factor = 1.0;
  double tx_power = 1.0;
  double noise_power = 1e-11;
  double path_loss_exponent = 2.0;

  void validate() const;
};

// One draw of the fading scenario. The direct transmitter-user link is
// blocked, so only the two RIS hops exist: G_mat feeds sector 1, h[k] leaves
// from the antennas of the user's sector.
struct ChannelRealization {
  CMatrix G_mat;                  // sector_size x N
  std::vector<CVector> h;         // K vectors, each sector_size
  std::vector<int> sector_of_user;  // 1-based sector index per user
  double noise_power = 0.0;
};

// Free-space reference gain (c/(4*pi*f))^2 scaled by d^-exponent.
double path_loss(double d, double f, double exponent);

// Ideal sector antenna covering 1/L of space; reflective covers a half space.
double antenna_gain(Mode mode, int sectors);
inline double antenna_gain(const RisConfig& config) {
  return antenna_gain(config.mode, config.sectors);
}

ChannelRealization realize(const SceneConfig& scene, const RisConfig& config,
                           Rng& rng);

// Steering vector of a half-wavelength ULA: entry m is exp(j*pi*m*sin(theta)).
CVector steering(int n, double theta);

// JSON snapshot with complex entries as [re, im] pairs.
std::string to_json(const ChannelRealization& ch);

}  // namespace bdris
