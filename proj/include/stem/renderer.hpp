#pragma once

#include <Eigen/Core>
#include <deque>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "stem/electromech.hpp"
#include "stem/errors.hpp"

namespace stem::renderer {

struct Texture {
    double spatial_period = 1e-3; // m
    double amplitude_v = 1.0;     // V
};

// One virtual object. Planes and buttons are half-space pads described by an
// outward normal and a surface point; spheres by center and radius.
struct SceneObject {
    enum class Kind { Plane, Sphere, Button };

    Kind kind = Kind::Plane;
    std::string id;
    Eigen::Vector3d normal{0.0, 0.0, 1.0};
    Eigen::Vector3d point{0.0, 0.0, 0.0};
    Eigen::Vector3d center{0.0, 0.0, 0.0};
    double radius = 0.0;        // m, sphere
    double button_travel = 0.0; // m, button
    double stiffness = 0.0;     // N/m
    double damping = 0.0;       // N s/m
    std::optional<Texture> texture;
};

struct Scene {
    std::vector<SceneObject> objects;
    const SceneObject* find(const std::string& id) const;
};

struct ContactState {
    std::string object_id;        // empty when out of contact
    double penetration = 0.0;     // m, >= 0
    double penetration_rate = 0.0; // m/s
    double tangential_speed = 0.0; // m/s
    bool in_contact() const { return !object_id.empty(); }
};

struct RenderCommand {
    long tick = 0;
    double voltage = 0.0;
    bool saturated = false;
    double governor_gain = 1.0;
};

// Sliding-window i^2 t bookkeeping for the thermal duty governor. The budget
// defaults to the device's measured 750 mA ceiling held for the 5-second
// interaction heuristic.
struct GovernorState {
    double window_s = 10.0;
    double budget_a2s = 0.75 * 0.75 * 5.0;
    double accumulator = 0.0;
    bool limiting = false;
    std::deque<double> contributions;

    void add(double current_a, double dt);
    double gain() const { return limiting ? 0.5 : 1.0; }
};

struct DriveOutput {
    double voltage = 0.0;
    bool saturated = false;
};

/// Deepest-penetration contact across the scene. Rates come from backward
/// differences against the previous tick; no contact yields a zero state.
ContactState contact_solve(const Scene& scene, const Eigen::Vector3d& fingertip,
                           const Eigen::Vector3d& prev_fingertip,
                           const ContactState& prev, double dt);

/// Virtual-wall force: spring + damper on penetration, clamped at zero so the
/// wall never pulls.
double target_force(const ContactState& cs, const SceneObject& obj);

/// Quasi-static force-to-voltage inversion V = F R / Km, clamped to +-V_max.
DriveOutput inverse_drive(double force_n, const electromech::LumpedParams& p);

/// Spatial-grating texture: instantaneous frequency = speed / period, phase
/// accumulated across ticks, amplitude ramped over the first 0.5 mm of
/// penetration. `phase` is the caller-held accumulator.
double texture_wave(const ContactState& cs, const Texture& texture, double& phase,
                    double dt);

/// Decaying click transient: 5 V * exp(-t/10ms) * sin(2 pi 150 Hz t),
/// truncated to zero after 30 ms.
double click_wave(double t_since_event);

// Per-finger rendering state machine: pose in, one drive command per tick.
class RenderSession {
  public:
    RenderSession(Scene scene, electromech::LumpedParams params, double tick_rate_hz = 1000.0);

    RenderCommand tick(const Eigen::Vector3d& fingertip);

    const ContactState& contact() const { return contact_; }
    const GovernorState& governor() const { return governor_; }
    double tick_rate() const { return tick_rate_; }

  private:
    Scene scene_;
    electromech::LumpedParams params_;
    double tick_rate_;
    double dt_;
    long tick_index_ = 0;
    ContactState contact_;
    Eigen::Vector3d prev_tip_{0.0, 0.0, 0.0};
    bool has_prev_tip_ = false;
    double texture_phase_ = 0.0;
    double click_elapsed_ = 1.0; // s since the last click event (starts expired)
    std::vector<std::string> latched_buttons_;
    GovernorState governor_;

    bool button_latched(const std::string& id) const;
    void set_latched(const std::string& id, bool latched);
};

/// Scene description file: one record per line,
///   plane  <id> nx ny nz px py pz stiffness damping [period amplitude]
///   sphere <id> cx cy cz radius   stiffness damping [period amplitude]
///   button <id> nx ny nz px py pz travel stiffness damping [period amplitude]
/// SI units; '#' starts a comment.
Scene load_scene(const std::string& path);
Scene parse_scene(std::istream& in);

} // namespace stem::renderer
