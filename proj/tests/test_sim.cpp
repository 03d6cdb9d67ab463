// SPDX-License-Identifier: Apache-2.0
#include "igvsim/sim.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

using namespace igvsim;
using wire::ChannelKind;

namespace {

const std::string kCourse = IGVSIM_SOURCE_DIR "/data/sample_course.json";

Scene open_field() {
  Scene s;
  s.geo = {42.678, -83.195};
  return s;
}

SimConfig all_sensors() {
  SimConfig cfg;
  cfg.pacing = Pacing::fast;
  for (ChannelKind k : wire::kAllChannels) cfg.channels.push_back({k, "127.0.0.1", 0});
  return cfg;
}

wire::Bytes motor(double v, double w) { return wire::encode_motor({v, w}); }

// Feeds a fixed command script, one entry per tick.
class ScriptedLink final : public SimLink {
 public:
  explicit ScriptedLink(std::vector<std::vector<wire::Bytes>> script) : script_(std::move(script)) {}
  void send(ChannelKind, wire::Bytes) override {}
  std::vector<wire::Bytes> drain_motor() override {
    return calls_ < script_.size() ? script_[calls_++] : std::vector<wire::Bytes>{};
  }

 private:
  std::vector<std::vector<wire::Bytes>> script_;
  std::size_t calls_{0};
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Robot-side listeners on ephemeral ports. Each accepted sensor socket gets a
// reader thread that counts frames, unless the channel is told to stall or
// to hang up right away.
class FakeRobot {
 public:
  explicit FakeRobot(bool with_motor = true) {
    for (ChannelKind k : wire::kAllChannels) {
      if (k == ChannelKind::motor && !with_motor) continue;
      listeners_[idx(k)] = net::Listener::bind(0);
    }
  }
  ~FakeRobot() {
    stop_ = true;
    for (auto& s : sockets_) s.shutdown();
    if (acceptor_.joinable()) acceptor_.join();
    for (auto& t : readers_) t.join();
  }

  void stall(ChannelKind k) { stalled_[idx(k)] = true; }
  void hang_up(ChannelKind k) { hang_up_[idx(k)] = true; }

  SimConfig config(SimConfig cfg) {
    cfg.scene_path = kCourse;
    cfg.channels.clear();
    for (ChannelKind k : wire::kAllChannels) {
      const std::uint16_t port = listeners_[idx(k)].valid() ? listeners_[idx(k)].port() : free_port();
      cfg.channels.push_back({k, "127.0.0.1", port});
    }
    return cfg;
  }

  void start() {
    acceptor_ = std::thread([this] {
      for (ChannelKind k : wire::kAllChannels) {
        auto& l = listeners_[idx(k)];
        if (!l.valid()) continue;
        std::optional<net::Socket> s;
        while (!s && !stop_) s = l.accept(std::chrono::milliseconds(50));
        if (!s) return;
        if (hang_up_[idx(k)]) {
          s->close();
          continue;
        }
        sockets_.push_back(std::move(*s));
      }
      for (std::size_t i = 0; i < sockets_.size(); ++i) readers_.emplace_back([this, i] { read_loop(i); });
    });
  }

  std::uint64_t received(ChannelKind k) const { return received_[idx(k)].load(); }

 private:
  static std::size_t idx(ChannelKind k) { return static_cast<std::size_t>(k); }
  static std::uint16_t free_port() {
    auto l = net::Listener::bind(0);
    return l.port();
  }

  void read_loop(std::size_t i) {
    // Sockets were pushed in channel order, skipping hung-up ones.
    std::size_t seen = 0;
    ChannelKind kind = ChannelKind::gps;
    for (ChannelKind k : wire::kAllChannels) {
      if (!listeners_[idx(k)].valid() || hang_up_[idx(k)]) continue;
      if (seen++ == i) kind = k;
    }
    if (kind == ChannelKind::motor || stalled_[idx(kind)]) {
      while (!stop_) std::this_thread::sleep_for(std::chrono::milliseconds(10));
      return;
    }
    try {
      while (wire::frame_read(sockets_[i])) ++received_[idx(kind)];
    } catch (const wire::WireError&) {
    }
  }

  std::array<net::Listener, 5> listeners_;
  std::array<bool, 5> stalled_{};
  std::array<bool, 5> hang_up_{};
  std::array<std::atomic<std::uint64_t>, 5> received_{};
  std::vector<net::Socket> sockets_;
  std::vector<std::thread> readers_;
  std::thread acceptor_;
  std::atomic<bool> stop_{false};
};

}  // namespace

TEST(World, CadenceAtDefaultsOverTenSeconds) {
  World w(open_field(), all_sensors());
  MemoryLink link;
  for (int i = 0; i < 500; ++i) w.tick(link);
  EXPECT_EQ(w.enqueued(ChannelKind::lidar), 100u);
  EXPECT_EQ(w.enqueued(ChannelKind::gps), 100u);
  EXPECT_EQ(w.enqueued(ChannelKind::compass), 250u);
  EXPECT_EQ(w.enqueued(ChannelKind::camera), 100u);
  EXPECT_EQ(link.sent[ChannelKind::lidar].size(), 100u);
  EXPECT_EQ(w.sim_time(), 10.0);
}

TEST(World, DisabledSensorsStaySilent) {
  SimConfig cfg = all_sensors();
  cfg.channels = {{ChannelKind::lidar, "127.0.0.1", 0}, {ChannelKind::motor, "127.0.0.1", 0}};
  World w(open_field(), cfg);
  MemoryLink link;
  for (int i = 0; i < 50; ++i) w.tick(link);
  EXPECT_EQ(w.enqueued(ChannelKind::camera), 0u);
  EXPECT_EQ(w.enqueued(ChannelKind::lidar), 10u);
}

TEST(World, LatestValidCommandWins) {
  World w(open_field(), all_sensors());
  MemoryLink link;
  link.pending_motor = {motor(0.1, 0), motor(0.2, 5), motor(0.3, -7)};
  w.tick(link);
  EXPECT_EQ(w.state().commanded, (MotorCommand{0.3f, -7.0f}));
  EXPECT_EQ(w.commands_received(), 3u);

  wire::Bytes nan = motor(0, 0);
  const float q = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data(), &q, 4);
  link.pending_motor = {motor(0.5, 1), nan, wire::Bytes(3)};
  w.tick(link);
  EXPECT_EQ(w.state().commanded, (MotorCommand{0.5f, 1.0f}));
  EXPECT_EQ(w.decode_errors(), 2u);
}

TEST(World, HoldsLastCommandWithoutTimeout) {
  World w(open_field(), all_sensors());
  MemoryLink link;
  link.pending_motor = {motor(0.5, 10)};
  for (int i = 0; i < 1000; ++i) w.tick(link);
  EXPECT_EQ(w.state().commanded, (MotorCommand{0.5f, 10.0f}));
  EXPECT_NEAR(w.state().v, 0.5, 1e-12);
}

TEST(World, CommandTimeoutZeroesCommand) {
  SimConfig cfg = all_sensors();
  cfg.cmd_timeout = 0.5;
  World w(open_field(), cfg);
  MemoryLink link;
  link.pending_motor = {motor(0.5, 10)};
  for (int i = 0; i < 25; ++i) w.tick(link);
  EXPECT_EQ(w.state().commanded.linear, 0.5f);
  w.tick(link);
  EXPECT_EQ(w.state().commanded, MotorCommand{});
}

TEST(World, DeadSimLinkChannelDoesNotStopPhysics) {
  World w(open_field(), all_sensors());
  MemoryLink link;
  link.pending_motor = {motor(1, 0)};
  for (int i = 0; i < 100; ++i) w.tick(link);
  EXPECT_GT(w.state().pose.x, 1.0);
}

TEST(RunWorld, DurationTwoSeconds) {
  SimConfig cfg = all_sensors();
  cfg.duration = 2.0;
  World w(open_field(), cfg);
  MemoryLink link;
  const SimReport r = run_world(w, link, cfg);
  EXPECT_EQ(r.ticks, 100u);
  EXPECT_EQ(r.sim_time, 2.0);
  EXPECT_EQ(r.stop_reason, "duration elapsed");
  EXPECT_EQ(r.messages_enqueued.at("compass"), 50u);
}

TEST(RunWorld, GoalStopsTheLoopAtTheEnteringTick) {
  Scene s = open_field();
  s.goal = GoalRegion{{2.0, 0.0}, 0.5};
  SimConfig cfg = all_sensors();
  cfg.duration = 30.0;
  World w(s, cfg);
  MemoryLink link;
  link.pending_motor = {motor(1, 0)};
  const SimReport r = run_world(w, link, cfg);
  ASSERT_TRUE(r.goal_reached);
  EXPECT_EQ(r.stop_reason, "goal reached");
  EXPECT_EQ(*r.goal_time, static_cast<double>(r.ticks) / 50.0);
  EXPECT_LE(norm(Vec2{r.final_state.pose.x, r.final_state.pose.y} - s.goal->center), 0.5);
  // One tick earlier the robot was still outside.
  EXPECT_GT(2.0 - 0.5 - (r.final_state.pose.x - r.final_state.v / 50.0), -1e-9);
}

TEST(RunWorld, TrajectoryIsAFunctionOfTheCommandStream) {
  std::vector<std::vector<wire::Bytes>> script(400);
  std::mt19937_64 rng(50);
  for (std::size_t i = 0; i < script.size(); i += 7) script[i].push_back(motor((rng() % 200) / 100.0 - 0.5, (rng() % 180) - 90.0));
  script[33].push_back(wire::Bytes(5));
  const auto dir = std::filesystem::temp_directory_path();
  auto run = [&](const std::string& name) {
    SimConfig cfg = all_sensors();
    cfg.duration = 8.0;
    cfg.seed = 42;
    cfg.lidar.noise_std = 0.01;
    cfg.dump_trajectory = (dir / name).string();
    World w(load_scene_file(kCourse), cfg);
    w.mutable_state().pose = w.scene().spawn;
    ScriptedLink link(script);
    run_world(w, link, cfg);
    return slurp(*cfg.dump_trajectory);
  };
  const std::string a = run("igvsim_traj_a.csv"), b = run("igvsim_traj_b.csv");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind(kTrajectoryHeader, 0), 0u);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 401);
}

TEST(RunWorld, FrameDumpsArePpm) {
  SimConfig cfg = all_sensors();
  cfg.duration = 0.3;
  const auto dir = std::filesystem::temp_directory_path() / "igvsim_frames_test";
  std::filesystem::remove_all(dir);
  cfg.dump_frames = dir.string();
  World w(load_scene_file(kCourse), cfg);
  MemoryLink link;
  run_world(w, link, cfg);
  const std::string f = slurp((dir / "frame_000000.ppm").string());
  EXPECT_EQ(f.rfind("P6\n160 120\n255\n", 0), 0u);
  EXPECT_EQ(f.size(), 15u + 160u * 120u * 3u);
  EXPECT_TRUE(std::filesystem::exists(dir / "frame_000002.ppm"));
  EXPECT_FALSE(std::filesystem::exists(dir / "frame_000003.ppm"));
}

TEST(BoundedQueueTest, DropsOldest) {
  BoundedQueue<int> q(2);
  EXPECT_TRUE(q.push(1));
  EXPECT_TRUE(q.push(2));
  EXPECT_FALSE(q.push(3));
  EXPECT_EQ(q.drain(), (std::vector<int>{2, 3}));
  q.push(4);
  q.close();
  EXPECT_EQ(q.pop(), 4);
  EXPECT_EQ(q.pop(), std::nullopt);
}

TEST(DriveParamsFile, StrictKeys) {
  EXPECT_EQ(drive_params_from_json(nlohmann::json::parse(R"({"v_max": 2})")).v_max, 2.0);
  EXPECT_THROW(drive_params_from_json(nlohmann::json::parse(R"({"vmax": 2})")), std::invalid_argument);
  EXPECT_THROW(drive_params_from_json(nlohmann::json::parse(R"({"a_max": -1})")), std::invalid_argument);
}

TEST(Simulation, MissingMotorListenerIsNamed) {
  FakeRobot robot(false);
  robot.start();
  SimConfig cfg = robot.config(all_sensors());
  cfg.connect_timeout = std::chrono::milliseconds(300);
  cfg.duration = 1.0;
  try {
    run_simulation(cfg);
    FAIL() << "expected a startup error";
  } catch (const StartupError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("motor"), std::string::npos) << msg;
    EXPECT_EQ(msg.find("lidar"), std::string::npos) << msg;
  }
}

TEST(Simulation, SharedPortsRejected) {
  SimConfig cfg = all_sensors();
  cfg.scene_path = kCourse;
  cfg.duration = 1.0;
  EXPECT_THROW(run_simulation(cfg), std::invalid_argument);
}

TEST(Simulation, StalledCameraReaderDoesNotSlowPhysics) {
  FakeRobot robot;
  robot.stall(ChannelKind::camera);
  robot.start();
  SimConfig cfg = robot.config(all_sensors());
  cfg.duration = 60.0;
  const SimReport r = run_simulation(cfg);
  EXPECT_EQ(r.ticks, 3000u);
  EXPECT_EQ(r.messages_enqueued.at("camera"), 600u);
  // 600 frames of 57 KB overflow any socket buffer; the queue sheds them.
  EXPECT_GT(r.messages_dropped.at("camera"), 0u);
  EXPECT_EQ(r.messages_dropped.at("lidar"), 0u);
  EXPECT_LT(r.wall_time, 30.0);
}

TEST(Simulation, CameraHangupLeavesOtherChannelsStreaming) {
  FakeRobot robot;
  robot.hang_up(ChannelKind::camera);
  robot.start();
  SimConfig cfg = robot.config(all_sensors());
  cfg.duration = 5.0;
  const SimReport r = run_simulation(cfg);
  EXPECT_EQ(r.ticks, 250u);
  EXPECT_NE(std::find(r.closed_channels.begin(), r.closed_channels.end(), "camera"), r.closed_channels.end());
  EXPECT_EQ(r.messages_sent.at("lidar"), 50u);
  EXPECT_EQ(r.messages_sent.at("compass"), 125u);
  EXPECT_LT(r.messages_sent.at("camera"), 50u);
}
