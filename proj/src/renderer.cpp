#include "stem/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stem::renderer {

namespace {

constexpr double kClickAmplitude = 5.0;   // V
constexpr double kClickFreq = 150.0;      // Hz
constexpr double kClickTau = 10e-3;       // s
constexpr double kClickCutoff = 30e-3;    // s
constexpr double kTextureRampDepth = 0.5e-3; // m

// Signed penetration of a point into one object; negative when outside.
double penetration_of(const SceneObject& obj, const Eigen::Vector3d& p) {
    switch (obj.kind) {
        case SceneObject::Kind::Plane:
        case SceneObject::Kind::Button:
            return -obj.normal.dot(p - obj.point);
        case SceneObject::Kind::Sphere:
            return obj.radius - (p - obj.center).norm();
    }
    return -1.0;
}

Eigen::Vector3d surface_normal(const SceneObject& obj, const Eigen::Vector3d& p) {
    if (obj.kind == SceneObject::Kind::Sphere) {
        const Eigen::Vector3d d = p - obj.center;
        const double n = d.norm();
        if (n > 1e-12) return d / n;
        return {0.0, 0.0, 1.0};
    }
    return obj.normal;
}

} // namespace

const SceneObject* Scene::find(const std::string& id) const {
    for (const auto& obj : objects) {
        if (obj.id == id) return &obj;
    }
    return nullptr;
}

void GovernorState::add(double current_a, double dt) {
    const double chunk = current_a * current_a * dt;
    contributions.push_back(chunk);
    accumulator += chunk;
    const std::size_t max_len = std::size_t(std::llround(window_s / dt));
    while (contributions.size() > max_len) {
        accumulator -= contributions.front();
        contributions.pop_front();
    }
    limiting = accumulator > budget_a2s;
}

ContactState contact_solve(const Scene& scene, const Eigen::Vector3d& fingertip,
                           const Eigen::Vector3d& prev_fingertip,
                           const ContactState& prev, double dt) {
    if (!(dt > 0.0)) throw ValidityError("contact_solve requires dt > 0");

    const SceneObject* deepest = nullptr;
    double best = 0.0;
    for (const auto& obj : scene.objects) {
        const double pen = penetration_of(obj, fingertip);
        if (pen > best) {
            best = pen;
            deepest = &obj;
        }
    }

    ContactState cs;
    if (!deepest) return cs; // out of contact: zero state

    cs.object_id = deepest->id;
    cs.penetration = best;
    const double prev_pen = (prev.object_id == deepest->id) ? prev.penetration : 0.0;
    cs.penetration_rate = (cs.penetration - prev_pen) / dt;

    const Eigen::Vector3d vel = (fingertip - prev_fingertip) / dt;
    const Eigen::Vector3d n = surface_normal(*deepest, fingertip);
    cs.tangential_speed = (vel - vel.dot(n) * n).norm();
    return cs;
}

double target_force(const ContactState& cs, const SceneObject& obj) {
    if (!cs.in_contact()) return 0.0;
    const double f = obj.stiffness * cs.penetration + obj.damping * cs.penetration_rate;
    return std::max(0.0, f);
}

DriveOutput inverse_drive(double force_n, const electromech::LumpedParams& p) {
    DriveOutput out;
    out.voltage = force_n * p.R / p.Km;
    if (std::abs(out.voltage) > p.V_max) {
        out.voltage = std::copysign(p.V_max, out.voltage);
        out.saturated = true;
    }
    return out;
}

double texture_wave(const ContactState& cs, const Texture& texture, double& phase,
                    double dt) {
    if (!(texture.spatial_period > 0.0)) throw ValidityError("texture period must be positive");
    const double f_inst = cs.tangential_speed / texture.spatial_period;
    phase += 2.0 * M_PI * f_inst * dt;
    if (f_inst <= 0.0 || !cs.in_contact()) return 0.0;
    const double depth_gain = std::min(1.0, cs.penetration / kTextureRampDepth);
    return texture.amplitude_v * depth_gain * std::sin(phase);
}

double click_wave(double t_since_event) {
    if (t_since_event < 0.0 || t_since_event >= kClickCutoff) return 0.0;
    return kClickAmplitude * std::exp(-t_since_event / kClickTau) *
           std::sin(2.0 * M_PI * kClickFreq * t_since_event);
}

RenderSession::RenderSession(Scene scene, electromech::LumpedParams params,
                             double tick_rate_hz)
    : scene_(std::move(scene)), params_(std::move(params)), tick_rate_(tick_rate_hz) {
    if (!(tick_rate_hz > 0.0)) throw ValidityError("tick rate must be positive");
    dt_ = 1.0 / tick_rate_hz;
}

bool RenderSession::button_latched(const std::string& id) const {
    return std::find(latched_buttons_.begin(), latched_buttons_.end(), id) !=
           latched_buttons_.end();
}

void RenderSession::set_latched(const std::string& id, bool latched) {
    auto it = std::find(latched_buttons_.begin(), latched_buttons_.end(), id);
    if (latched && it == latched_buttons_.end()) latched_buttons_.push_back(id);
    if (!latched && it != latched_buttons_.end()) latched_buttons_.erase(it);
}

RenderCommand RenderSession::tick(const Eigen::Vector3d& fingertip) {
    if (!has_prev_tip_) {
        prev_tip_ = fingertip;
        has_prev_tip_ = true;
    }
    contact_ = contact_solve(scene_, fingertip, prev_tip_, contact_, dt_);
    prev_tip_ = fingertip;

    click_elapsed_ += dt_;

    double v_spring = 0.0;
    bool saturated = false;
    double v_texture = 0.0;
    const SceneObject* obj = contact_.in_contact() ? scene_.find(contact_.object_id) : nullptr;
    if (obj) {
        DriveOutput drive = inverse_drive(target_force(contact_, *obj), params_);
        v_spring = drive.voltage;
        saturated = drive.saturated;
        if (obj->texture) v_texture = texture_wave(contact_, *obj->texture, texture_phase_, dt_);

        // button edge with half-travel release hysteresis
        if (obj->kind == SceneObject::Kind::Button) {
            if (!button_latched(obj->id) && contact_.penetration >= obj->button_travel) {
                set_latched(obj->id, true);
                click_elapsed_ = 0.0;
            }
        }
    }
    // release latched buttons once their penetration falls below travel/2
    for (const auto& o : scene_.objects) {
        if (o.kind != SceneObject::Kind::Button || !button_latched(o.id)) continue;
        const double pen = (obj && o.id == contact_.object_id) ? contact_.penetration : 0.0;
        if (pen < 0.5 * o.button_travel) set_latched(o.id, false);
    }

    double v = v_spring + v_texture + click_wave(click_elapsed_);
    if (std::abs(v) > params_.V_max) {
        v = std::copysign(params_.V_max, v);
        saturated = true;
    }

    RenderCommand cmd;
    cmd.tick = tick_index_++;
    cmd.governor_gain = governor_.gain();
    cmd.voltage = v * cmd.governor_gain;
    cmd.saturated = saturated;
    governor_.add(cmd.voltage / params_.R, dt_);
    return cmd;
}

namespace {

SceneObject parse_object(const std::string& line, std::size_t line_no) {
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;

    SceneObject obj;
    auto read_vec = [&](Eigen::Vector3d& v) { ss >> v.x() >> v.y() >> v.z(); };
    auto read_texture = [&]() {
        double period, amp;
        if (ss >> period >> amp) {
            if (!(period > 0.0)) throw ParseError(line_no, "texture period must be positive");
            obj.texture = Texture{period, amp};
        }
    };

    if (kind == "plane") {
        obj.kind = SceneObject::Kind::Plane;
        ss >> obj.id;
        read_vec(obj.normal);
        read_vec(obj.point);
        ss >> obj.stiffness >> obj.damping;
    } else if (kind == "sphere") {
        obj.kind = SceneObject::Kind::Sphere;
        ss >> obj.id;
        read_vec(obj.center);
        ss >> obj.radius >> obj.stiffness >> obj.damping;
    } else if (kind == "button") {
        obj.kind = SceneObject::Kind::Button;
        ss >> obj.id;
        read_vec(obj.normal);
        read_vec(obj.point);
        ss >> obj.button_travel >> obj.stiffness >> obj.damping;
    } else {
        throw ParseError(line_no, "unknown scene object kind '" + kind + "'");
    }
    if (ss.fail()) throw ParseError(line_no, "malformed " + kind + " record");
    read_texture();

    if (obj.stiffness < 0.0) throw ParseError(line_no, "stiffness must be >= 0");
    const double norm = obj.normal.norm();
    if (obj.kind != SceneObject::Kind::Sphere) {
        if (norm < 1e-12) throw ParseError(line_no, "zero surface normal");
        obj.normal /= norm;
    }
    return obj;
}

} // namespace

Scene parse_scene(std::istream& in) {
    Scene scene;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        scene.objects.push_back(parse_object(line.substr(first), line_no));
    }
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene file " + path);
    return parse_scene(in);
}

} // namespace stem::renderer
