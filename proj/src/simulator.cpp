#include "ilio/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "ilio/rng.hpp"

namespace ilio {

SimWorld box_room(double half) {
  SimWorld world;
  auto wall = [&](const Vec3& n, const Vec3& u, const Vec3& v) {
    PlanePrimitive p;
    p.origin = half * n;
    p.normal = n;
    p.u = u;
    p.v = v;
    p.u_half = half;
    p.v_half = half;
    world.planes.push_back(p);
  };
  wall(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1));
  wall(Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1));
  wall(Vec3(0, 1, 0), Vec3(1, 0, 0), Vec3(0, 0, 1));
  wall(Vec3(0, -1, 0), Vec3(1, 0, 0), Vec3(0, 0, 1));
  wall(Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0));
  wall(Vec3(0, 0, -1), Vec3(1, 0, 0), Vec3(0, 1, 0));

  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      EdgePrimitive e;
      e.anchor = Vec3(sx * half, sy * half, 0.0);
      e.direction = Vec3(0, 0, 1);
      e.half_extent = half;
      world.edges.push_back(e);
    }
  }
  return world;
}

double point_primitive_distance(const SimWorld& world, int primitive_id,
                                const Vec3& p) {
  const int np = int(world.planes.size());
  if (primitive_id < 0 ||
      primitive_id >= np + int(world.edges.size())) {
    throw std::out_of_range("point_primitive_distance: bad primitive id");
  }
  if (primitive_id < np) {
    const PlanePrimitive& pl = world.planes[primitive_id];
    return std::abs(pl.normal.dot(p - pl.origin));
  }
  const EdgePrimitive& e = world.edges[primitive_id - np];
  return ((p - e.anchor).cross(e.direction)).norm() / e.direction.norm();
}

TrajectorySpec high_dynamics_preset(double motion_seconds,
                                    double still_seconds) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::kSinusoid;
  spec.duration = motion_seconds;
  spec.still_seconds = still_seconds;
  spec.ramp_seconds = 0.5;
  spec.translation_amplitude = Vec3(0.5, 0.5, 0.5);
  spec.translation_frequency = 1.0;
  spec.translation_phase = Vec3(0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0);
  spec.rotation_axis = Vec3(1, 1, 1).normalized();
  spec.rotation_amplitude = 0.5;  // peak rate 0.5 * 2*pi ~ 3.1 rad/s
  spec.rotation_frequency = 1.0;
  return spec;
}

namespace {

// C2 smoothstep envelope with value/first/second derivatives.
struct Envelope {
  double e, de, dde;
};

Envelope envelope_at(double tau, double ramp) {
  if (ramp <= 0.0 || tau >= ramp) return {1.0, 0.0, 0.0};
  const double s = tau / ramp;
  const double e = ((6 * s - 15) * s + 10) * s * s * s;
  const double de = ((30 * s - 60) * s + 30) * s * s / ramp;
  const double dde = ((120 * s - 180) * s + 60) * s / (ramp * ramp);
  return {e, de, dde};
}

}  // namespace

TrajectorySample truth_at(const TrajectorySpec& spec, double t) {
  if (t < -1e-12 || t > spec.total_duration() + 1e-12) {
    throw std::out_of_range("truth_at: t outside [0, total_duration]");
  }
  TrajectorySample out;
  switch (spec.kind) {
    case TrajectoryKind::kRest:
      return out;
    case TrajectoryKind::kConstantVelocity: {
      out.pose.t = spec.velocity * t;
      out.v = spec.velocity;
      if (spec.rotation_rate != 0.0) {
        const Vec3 n = spec.rotation_axis.normalized();
        out.pose.q = quat_exp(n * (spec.rotation_rate * t));
        out.omega_body = n * spec.rotation_rate;
      }
      return out;
    }
    case TrajectoryKind::kSinusoid:
      break;
  }

  const double tau = t - spec.still_seconds;
  if (tau <= 0.0) return out;

  const Envelope env = envelope_at(tau, spec.ramp_seconds);
  const double wt = 2.0 * M_PI * spec.translation_frequency;
  for (int i = 0; i < 3; ++i) {
    const double a = spec.translation_amplitude[i];
    const double psi = wt * tau + spec.translation_phase[i];
    const double s = std::sin(psi), c = std::cos(psi);
    out.pose.t[i] = a * env.e * s;
    out.v[i] = a * (env.de * s + env.e * wt * c);
    out.a_w[i] =
        a * (env.dde * s + 2.0 * env.de * wt * c - env.e * wt * wt * s);
  }

  const double wr = 2.0 * M_PI * spec.rotation_frequency;
  const double sr = std::sin(wr * tau), cr = std::cos(wr * tau);
  const double theta = spec.rotation_amplitude * env.e * sr;
  const double dtheta =
      spec.rotation_amplitude * (env.de * sr + env.e * wr * cr);
  const Vec3 n = spec.rotation_axis.normalized();
  out.pose.q = quat_exp(n * theta);
  // The axis is fixed, so the body rate is the angle rate along it.
  out.omega_body = n * dtheta;
  return out;
}

std::vector<ImuSample> synthesize_imu(const TrajectorySpec& spec,
                                      const ImuSynthOptions& options) {
  if (options.rate < 100.0) {
    throw std::invalid_argument("synthesize_imu: rate must be >= 100 Hz");
  }
  GaussianRng rng(options.seed);
  const double sd_g = options.sigma_gyro * std::sqrt(options.rate);
  const double sd_a = options.sigma_accel * std::sqrt(options.rate);
  const double sd_wg = options.walk_gyro / std::sqrt(options.rate);
  const double sd_wa = options.walk_accel / std::sqrt(options.rate);

  Vec3 bg = options.bias_gyro;
  Vec3 ba = options.bias_accel;
  const int n = int(std::llround(spec.total_duration() * options.rate));
  std::vector<ImuSample> samples;
  samples.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / options.rate;
    const TrajectorySample truth = truth_at(spec, t);
    const Mat3 Rwb = truth.pose.q.toRotationMatrix().transpose();
    ImuSample s;
    s.t = t;
    s.gyro = truth.omega_body + bg;
    s.accel = Rwb * (truth.a_w + options.gravity) + ba;
    if (sd_g > 0.0) s.gyro += sd_g * rng.normal3();
    if (sd_a > 0.0) s.accel += sd_a * rng.normal3();
    if (sd_wg > 0.0) bg += sd_wg * rng.normal3();
    if (sd_wa > 0.0) ba += sd_wa * rng.normal3();
    samples.push_back(s);
  }
  return samples;
}

SyntheticScan synthesize_scan(const SimWorld& world, const TrajectorySpec& spec,
                              double t_start, double t_end, int points_per_scan,
                              double noise_sigma, std::uint64_t seed) {
  if (world.planes.empty() && world.edges.empty()) {
    throw std::invalid_argument("synthesize_scan: empty world");
  }
  if (!(t_end > t_start)) {
    throw std::invalid_argument("synthesize_scan: t_end must exceed t_start");
  }
  GaussianRng rng(seed);
  SyntheticScan out;
  out.scan.t_start = t_start;
  out.scan.t_end = t_end;
  out.scan.points.reserve(points_per_scan);
  out.world_points.reserve(points_per_scan);
  out.primitive_ids.reserve(points_per_scan);

  const int np = int(world.planes.size());
  const int ne = int(world.edges.size());
  for (int j = 0; j < points_per_scan; ++j) {
    const double tj =
        points_per_scan == 1
            ? t_start
            : t_start + (t_end - t_start) * j / (points_per_scan - 1);
    const bool on_edge = ne > 0 && (np == 0 || j % 4 == 3);

    Vec3 pw;
    int id;
    int label;
    if (on_edge) {
      const int e = ne == 1 ? 0 : int(rng.uniform(0, ne));
      const EdgePrimitive& edge = world.edges[std::min(e, ne - 1)];
      pw = edge.anchor +
           edge.direction * rng.uniform(-edge.half_extent, edge.half_extent);
      id = np + std::min(e, ne - 1);
      label = 0;
    } else {
      const int pidx = np == 1 ? 0 : int(rng.uniform(0, np));
      const PlanePrimitive& pl = world.planes[std::min(pidx, np - 1)];
      pw = pl.origin + pl.u * rng.uniform(-pl.u_half, pl.u_half) +
           pl.v * rng.uniform(-pl.v_half, pl.v_half);
      id = std::min(pidx, np - 1);
      label = 1;
    }

    const TrajectorySample truth = truth_at(spec, tj);
    Vec3 pb = truth.pose.inverse() * pw;
    if (noise_sigma > 0.0) pb += noise_sigma * rng.normal3();

    ScanPoint pt;
    pt.t = tj;
    pt.p = pb;
    pt.ring = 0;
    pt.label = label;
    out.scan.points.push_back(pt);
    out.world_points.push_back(pw);
    out.primitive_ids.push_back(id);
  }
  return out;
}

}  // namespace ilio
