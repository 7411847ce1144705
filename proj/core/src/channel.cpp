#include "bdris/channel.hpp"

#include <cmath>
#include <complex>

#include "bdris/errors.hpp"
#include "json.hpp"

namespace bdris {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
}

void SceneConfig::validate() const {
  if (N <= 0 || K <= 0) throw ConfigError("N and K must be positive");
  if (carrier_frequency <= 0) throw ConfigError("carrier_frequency must be positive");
  if (d_tx_ris < 1 || d_ris_user < 1)
    throw ConfigError("distances must be at least the 1 m reference");
  if (rician_factor < 0) throw ConfigError("rician_factor must be nonnegative");
  if (tx_power < 0) throw ConfigError("tx_power must be nonnegative");
  if (noise_power <= 0) throw ConfigError("noise_power must be positive");
}

double path_loss(double d, double f, double exponent) {
  if (d < 1) throw DomainError("path_loss is valid only for d >= 1 m");
  if (f <= 0) throw DomainError("carrier frequency must be positive");
  double ref = kSpeedOfLight / (4.0 * M_PI * f);
  return ref * ref * std::pow(d, -exponent);
}

double antenna_gain(Mode mode, int sectors) {
  switch (mode) {
    case Mode::Reflective:
      return 2.0;
    case Mode::Hybrid:
      return 2.0;
    case Mode::MultiSector:
      return static_cast<double>(sectors);
  }
  throw ConfigError("invalid mode");
}

CVector steering(int n, double theta) {
  CVector a(n);
  double s = std::sin(theta);
  for (int m = 0; m < n; ++m) a(m) = std::polar(1.0, M_PI * m * s);
  return a;
}

ChannelRealization realize(const SceneConfig& scene, const RisConfig& config,
                           Rng& rng) {
  scene.validate();
  config.validate();
  if (scene.K % config.sectors != 0)
    throw ConfigError("K must be divisible by the sector count");

  const int Ms = config.sector_size();
  const double gain = antenna_gain(config);
  const double amp_g =
      std::sqrt(path_loss(scene.d_tx_ris, scene.carrier_frequency,
                          scene.path_loss_exponent) *
                gain);
  const double amp_h =
      std::sqrt(path_loss(scene.d_ris_user, scene.carrier_frequency,
                          scene.path_loss_exponent) *
                gain);
  const double w_los = std::sqrt(scene.rician_factor / (1.0 + scene.rician_factor));
  const double w_nlos = std::sqrt(1.0 / (1.0 + scene.rician_factor));

  // Angles are drawn before any fading noise so that realizations with the
  // same seed agree across architectures sharing (M, L).
  const double theta_arrival = rng.uniform(-M_PI / 2, M_PI / 2);
  const double theta_departure = rng.uniform(-M_PI / 2, M_PI / 2);
  std::vector<double> theta_user(scene.K);
  for (double& t : theta_user) t = rng.uniform(-M_PI / 2, M_PI / 2);

  ChannelRealization ch;
  ch.noise_power = scene.noise_power;

  CMatrix los_g =
      steering(Ms, theta_arrival) * steering(scene.N, theta_departure).transpose();
  ch.G_mat.resize(Ms, scene.N);
  for (int c = 0; c < scene.N; ++c)
    for (int r = 0; r < Ms; ++r)
      ch.G_mat(r, c) = amp_g * (w_los * los_g(r, c) + w_nlos * rng.cgauss());

  ch.h.reserve(scene.K);
  ch.sector_of_user.reserve(scene.K);
  const int per_sector = scene.K / config.sectors;
  for (int k = 0; k < scene.K; ++k) {
    CVector los_h = steering(Ms, theta_user[k]);
    CVector hk(Ms);
    for (int r = 0; r < Ms; ++r)
      hk(r) = amp_h * (w_los * los_h(r) + w_nlos * rng.cgauss());
    ch.h.push_back(std::move(hk));
    ch.sector_of_user.push_back(k / per_sector + 1);
  }
  return ch;
}

namespace {

nlohmann::json complex_rows(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string to_json(const ChannelRealization& ch) {
  nlohmann::json j;
  j["G"] = complex_rows(ch.G_mat);
  nlohmann::json users = nlohmann::json::array();
  for (const CVector& hk : ch.h) {
    nlohmann::json v = nlohmann::json::array();
    for (Eigen::Index r = 0; r < hk.size(); ++r)
      v.push_back({hk(r).real(), hk(r).imag()});
    users.push_back(std::move(v));
  }
  j["h"] = std::move(users);
  j["sector_of_user"] = ch.sector_of_user;
  j["noise_power"] = ch.noise_power;
  return j.dump(2);
}

}  // namespace bdris
