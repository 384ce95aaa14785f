// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringgan/data/dataset.hpp"
#include "ringgan/data/stream.hpp"
#include "ringgan/gan/inference.hpp"
#include "ringgan/gan/losses.hpp"
#include "ringgan/gan/networks.hpp"
#include "ringgan/gan/trainer.hpp"
#include "ringgan/geometry/mesh.hpp"
#include "ringgan/geometry/spline.hpp"
#include "ringgan/geometry/tube.hpp"
#include "ringgan/image_io.hpp"
#include "ringgan/rng.hpp"
#include "ringgan/service/server.hpp"
#include "ringgan/tensor/checkpoint.hpp"
#include "ringgan/tensor/image_tensor.hpp"
#include "support/gradcheck.hpp"

// After Eigen: <resolv.h> defines a _res macro.
#include <httplib.h>

using namespace ringgan;
using nlohmann::json;
namespace fs = std::filesystem;
using tensor::Tensord;
using tensor::Tensorf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      if (!pass) detail << "; ";
      pass = false;
      detail << "failed: " << what;
    }
  }
};

class Report {
 public:
  void run(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = Clock::now();
    try {
      body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("%s %d %s (%.1f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), seconds_since(start),
                o.detail.str().empty() ? "" : ": ", o.detail.str().c_str());
    std::fflush(stdout);
    failures_ += o.pass ? 0 : 1;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

struct Workspace {
  fs::path root = fs::temp_directory_path() / "ringgan_acceptance";
  Workspace() {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
};

// Criterion 1 -----------------------------------------------------------

void gradient_checks(Outcome& o) {
  const auto start = Clock::now();
  double worst = 0.0;
  std::string worst_op;
  const auto cases = testing::all_grad_cases();
  for (const auto& c : cases) {
    const auto r = testing::grad_check(c, 20, 4242, 1e-4);
    o.require(r.trials >= 20, c.name + " ran " + std::to_string(r.trials) + " trials");
    o.require(r.checked > 0, c.name + " checked no elements");
    o.require(r.max_rel_error < 1e-3, c.name + " max rel error " + std::to_string(r.max_rel_error));
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_op = c.name;
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 120.0, "runtime " + std::to_string(elapsed) + " s");
  o.detail << cases.size() << " ops x 20 trials, worst " << worst_op << " " << worst;
}

// Criterion 2 -----------------------------------------------------------

constexpr double kGa = 0.7, kGb = 0.1;  // G_AB(x) = tanh(0.7 x + 0.1)
constexpr double kFa = 0.5, kFb = -0.2;  // G_BA(y) = 0.5 y - 0.2
constexpr double kDa = 1.3, kDb = -0.2;  // D(x) = sigmoid(1.3 x - 0.2)

double g_ab_scalar(double v) { return std::tanh(kGa * v + kGb); }
double g_ba_scalar(double v) { return kFa * v + kFb; }
double d_scalar(double v) { return 1.0 / (1.0 + std::exp(-(kDa * v + kDb))); }

gan::Network<double> g_ab_net() {
  return [](const Tensord& x) { return tensor::tanh(tensor::add_scalar(tensor::mul_scalar(x, kGa), kGb)); };
}
gan::Network<double> g_ba_net() {
  return [](const Tensord& x) { return tensor::add_scalar(tensor::mul_scalar(x, kFa), kFb); };
}
gan::Network<double> d_net() {
  return [](const Tensord& x) { return tensor::sigmoid(tensor::add_scalar(tensor::mul_scalar(x, kDa), kDb)); };
}

double bce_scalar(double p, double target) { return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p)); }

void loss_oracles(Outcome& o) {
  Rng rng(99);
  const Tensord x = testing::random_tensor(rng, {2, 3, 8, 8});
  const Tensord y = testing::random_tensor(rng, {2, 3, 8, 8});
  const auto xs = std::vector<double>(x.data().begin(), x.data().end());
  const auto ys = std::vector<double>(y.data().begin(), y.data().end());
  const std::size_t n = xs.size();

  double cyc = 0.0, idt = 0.0;
  std::vector<double> terms;
  {
    double ca = 0.0, cb = 0.0, ia = 0.0, ib = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ca += std::abs(g_ba_scalar(g_ab_scalar(xs[i])) - xs[i]);
      cb += std::abs(g_ab_scalar(g_ba_scalar(ys[i])) - ys[i]);
      ia += std::abs(g_ab_scalar(ys[i]) - ys[i]);
      ib += std::abs(g_ba_scalar(xs[i]) - xs[i]);
    }
    cyc = ca / n + cb / n;
    idt = ia / n + ib / n;
  }
  double d_real = 0.0, d_fake = 0.0, g_adv_ab = 0.0, g_adv_ba = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d_real += bce_scalar(d_scalar(ys[i]), 1.0);
    d_fake += bce_scalar(d_scalar(g_ab_scalar(xs[i])), 0.0);
    g_adv_ab += bce_scalar(d_scalar(g_ab_scalar(xs[i])), 1.0);
    g_adv_ba += bce_scalar(d_scalar(g_ba_scalar(ys[i])), 1.0);
  }
  d_real /= n;
  d_fake /= n;
  g_adv_ab /= n;
  g_adv_ba /= n;
  const double d_oracle = 0.5 * (d_real + d_fake);
  const double total_oracle = g_adv_ab + g_adv_ba + 10.0 * cyc + 0.1 * idt;

  const auto gab = g_ab_net(), gba = g_ba_net(), d = d_net();
  const double cyc_impl = gan::cycle_loss<double>(gab, gba, x, y).item();
  const double idt_impl = gan::identity_loss<double>(gab, gba, x, y).item();
  const Tensord fake_b = gab(x);
  const auto adv = gan::adversarial_losses<double>(d, y, fake_b);
  const Tensord adv_ab = gan::generator_adversarial_loss<double>(d, fake_b);
  const Tensord adv_ba = gan::generator_adversarial_loss<double>(d, gba(y));
  const double total_impl =
      gan::total_generator_loss<double>(adv_ab, adv_ba, gan::cycle_loss<double>(gab, gba, x, y),
                                        gan::identity_loss<double>(gab, gba, x, y))
          .item();

  const std::map<std::string, std::pair<double, double>> checks = {
      {"cycle", {cyc_impl, cyc}},
      {"identity", {idt_impl, idt}},
      {"adversarial D", {adv.d_loss.item(), d_oracle}},
      {"adversarial G", {adv.g_loss.item(), g_adv_ab}},
      {"total", {total_impl, total_oracle}},
  };
  double worst = 0.0;
  for (const auto& [name, v] : checks) {
    const double err = std::abs(v.first - v.second);
    worst = std::max(worst, err);
    o.require(err < 1e-6, name + " differs by " + std::to_string(err));
  }
  const gan::LossWeights defaults;
  o.require(defaults.lambda_cyc == 10.0 && defaults.lambda_ident == 0.1, "default loss weights");
  o.detail << "5 terms on 2x3x8x8, max abs error " << worst;
}

// Criterion 3 -----------------------------------------------------------

void schedule_conformance(Outcome& o) {
  const gan::TrainConfig config;
  int wrong = 0;
  for (int e = 0; e < 100; ++e) wrong += gan::lr_schedule(e, config) == 0.0002 ? 0 : 1;
  for (int e = 100; e < 200; ++e) wrong += gan::lr_schedule(e, config) == 0.00002 ? 0 : 1;
  o.require(wrong == 0, std::to_string(wrong) + " epochs with the wrong rate");
  o.require(config.total_epochs() == 200, "200 epochs in total");

  // Discriminator loss against the unscaled oracle, via the library call.
  Rng rng(5);
  const Tensord real = testing::random_tensor(rng, {2, 3, 8, 8});
  const Tensord fake = testing::random_tensor(rng, {2, 3, 8, 8});
  double unscaled = 0.0;
  for (std::size_t i = 0; i < real.data().size(); ++i) {
    unscaled += bce_scalar(d_scalar(real.data()[i]), 1.0) / real.numel();
    unscaled += bce_scalar(d_scalar(fake.data()[i]), 0.0) / fake.numel();
  }
  const double scaled = gan::discriminator_loss<double>(d_net(), real, fake).item();
  o.require(std::abs(scaled - 0.5 * unscaled) < 1e-9, "library discriminator loss is not half the oracle");
  o.require(std::abs(scaled - unscaled) > 0.1 * unscaled, "half factor indistinguishable from unscaled");

  // The trainer's logged discriminator losses carry the factor too.
  gan::TrainConfig small = gan::TrainConfig::smoke(32);
  small.generator.base_channels = 4;
  small.generator.n_res_blocks = 1;
  small.discriminator.base_channels = 4;
  small.seed = 3;
  o.require(small.d_loss_scale == 0.5, "default d_loss_scale");
  gan::Trainer trainer(small);
  const gan::Trainer before(trainer.checkpoint());
  Rng img(8);
  Tensorf a = Tensorf::zeros({1, 3, 32, 32}), b = Tensorf::zeros({1, 3, 32, 32});
  for (float& v : a.data()) v = static_cast<float>(img.uniform(-1.0, 1.0));
  for (float& v : b.data()) v = static_cast<float>(img.uniform(-1.0, 1.0));
  const gan::StepMetrics m = trainer.train_step(a, b, 0);

  auto bce_mean = [](const Tensorf& p, double target) {
    double s = 0.0;
    for (float v : p.data()) s += bce_scalar(std::clamp(static_cast<double>(v), 1e-7, 1.0 - 1e-7), target);
    return s / static_cast<double>(p.numel());
  };
  tensor::NoGradGuard guard;
  const Tensorf fake_b = before.g_ab()(a);
  const Tensorf fake_a = before.g_ba()(b);
  const double d_b_unscaled = bce_mean(before.d_b()(b), 1.0) + bce_mean(before.d_b()(fake_b), 0.0);
  const double d_a_unscaled = bce_mean(before.d_a()(a), 1.0) + bce_mean(before.d_a()(fake_a), 0.0);
  o.require(std::abs(m.d_b - 0.5 * d_b_unscaled) < 1e-5, "trainer d_b " + std::to_string(m.d_b) + " vs half oracle " +
                                                            std::to_string(0.5 * d_b_unscaled));
  o.require(std::abs(m.d_a - 0.5 * d_a_unscaled) < 1e-5, "trainer d_a " + std::to_string(m.d_a) + " vs half oracle " +
                                                            std::to_string(0.5 * d_a_unscaled));
  o.detail << "epochs 0-99 at 0.0002, 100-199 at 0.00002; trainer d_b " << m.d_b << " = 0.5 x " << d_b_unscaled;
}

// Criterion 4 -----------------------------------------------------------

int conv_out(int size, int kernel, int stride, int padding) { return (size + 2 * padding - kernel) / stride + 1; }

// Independent shape propagation through the 70x70 PatchGAN layer list.
int patch_oracle(int size) {
  int s = size;
  for (int i = 0; i < 3; ++i) s = conv_out(s, 4, 2, 1);
  s = conv_out(s, 4, 1, 1);
  return conv_out(s, 4, 1, 1);
}

void architecture_arithmetic(Outcome& o) {
  for (int size : {64, 256}) {
    gan::GeneratorConfig gc;
    gc.n_res_blocks = gan::GeneratorConfig::default_res_blocks(size);
    const gan::Generator g(gc, 1);
    std::map<std::string, tensor::Shape> shapes;
    for (const auto& p : g.named_parameters()) shapes[p.name] = p.tensor.shape();
    o.require(shapes["stem.weight"] == tensor::Shape({64, 3, 7, 7}), "stem is not 7x7");
    o.require(shapes["head.weight"] == tensor::Shape({3, 64, 7, 7}), "head is not 7x7");
    o.require(conv_out(size, 7, 1, 3) == size, "kernel 7 / padding 3 must preserve size");

    tensor::NoGradGuard guard;
    const Tensorf x = Tensorf::full({1, 3, size, size}, 0.25F);
    const Tensorf y = g(x);
    o.require(y.shape() == tensor::Shape({1, 3, size, size}), "generator changes size at " + std::to_string(size));

    const gan::Discriminator d(gan::DiscriminatorConfig{}, 2);
    const Tensorf p = d(x);
    const int expect = patch_oracle(size);
    o.require(p.shape() == tensor::Shape({1, 1, expect, expect}),
              "discriminator map at " + std::to_string(size) + " is " + tensor::to_string(p.shape()));
    if (size != 64) o.detail << "; ";
    o.detail << size << " px: G " << tensor::to_string(y.shape()) << " (" << gc.n_res_blocks << " blocks), D "
             << tensor::to_string(p.shape());
  }
  o.require(patch_oracle(256) == 30 && patch_oracle(64) == 6, "oracle disagrees with 30x30 / 6x6");
}

// Criterion 5 -----------------------------------------------------------

struct SmokeRun {
  fs::path dataset;
  fs::path checkpoint;
  std::vector<gan::StepMetrics> history;
  bool ok = false;
};

SmokeRun g_smoke;

void overfit_smoke(const Workspace& ws, Outcome& o) {
  const auto start = Clock::now();
  data::DatasetOptions opts;
  opts.n_a = 8;
  opts.n_b = 8;
  opts.image_size = 32;
  opts.seed = 17;
  opts.created_at = "2000-01-01T00:00:00Z";
  g_smoke.dataset = ws.root / "smoke_data";
  data::generate_dataset(opts, g_smoke.dataset);

  gan::TrainConfig config = gan::TrainConfig::smoke(32);
  config.seed = 17;
  gan::Trainer trainer(config);
  const auto stream = data::UnpairedStream::open(g_smoke.dataset, config.seed, 32, 1);
  o.require(stream.steps_per_epoch() == 8, "8 steps per epoch");
  bool finite = true;
  for (int step = 0; step < 300; ++step) {
    const int epoch = static_cast<int>(step / stream.steps_per_epoch());
    const auto [a, b] = stream.batch(epoch, step % stream.steps_per_epoch());
    const gan::StepMetrics m = trainer.train_step(a, b, epoch);
    for (double v : {m.gan_ab, m.gan_ba, m.cycle, m.identity, m.g_total, m.d_a, m.d_b}) finite &= std::isfinite(v);
    g_smoke.history.push_back(m);
  }
  o.require(finite, "non-finite loss");
  o.require(trainer.step() == 300, "300 steps");
  const double first = g_smoke.history.front().cycle;
  double final_mean = 0.0;
  for (std::size_t i = g_smoke.history.size() - 8; i < g_smoke.history.size(); ++i) final_mean += g_smoke.history[i].cycle;
  final_mean /= 8.0;
  o.require(final_mean < 0.5 * first, "final cycle " + std::to_string(final_mean) + " vs step 1 " + std::to_string(first));
  g_smoke.checkpoint = ws.root / "smoke.ckpt";
  tensor::save_checkpoint(g_smoke.checkpoint, trainer.checkpoint());
  g_smoke.ok = true;
  const double elapsed = seconds_since(start);
  o.require(elapsed < 600.0, "runtime " + std::to_string(elapsed) + " s");
  o.detail << "cycle loss step 1 " << first << ", mean of last 8 steps " << final_mean << " ("
           << 100.0 * final_mean / first << "%)";
}

// Criterion 6 -----------------------------------------------------------

void geometry_suite(Outcome& o) {
  const data::SpecRanges ranges;
  int watertight = 0;
  int round_trips = 0;
  double worst_wrap = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const geometry::RingSpec spec = data::sample_spec(ranges, derive_seed(2025, i, stream_tag("ACCEPT")));
    const geometry::RingModel ring = geometry::generate_ring(spec);
    for (const auto& s : ring.strands) {
      worst_wrap = std::max(worst_wrap, (geometry::eval_spline(s, 0.0) - geometry::eval_spline(s, 1.0)).norm());
      const geometry::Vec3 d0 = geometry::eval_spline_derivative(s, 0.0);
      const geometry::Vec3 d1 = geometry::eval_spline_derivative(s, 1.0);
      worst_wrap = std::max(worst_wrap, (d0 - d1).norm() / d0.norm());
    }
    const geometry::TriMesh mesh = geometry::ring_mesh(ring).mesh;
    // Edge-incidence oracle: every undirected edge on exactly two triangles.
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
    for (const auto& t : mesh.triangles) {
      for (int k = 0; k < 3; ++k) {
        std::uint32_t u = t[k], v = t[(k + 1) % 3];
        if (u > v) std::swap(u, v);
        ++edges[{u, v}];
      }
    }
    const bool closed = !edges.empty() && std::all_of(edges.begin(), edges.end(), [](const auto& e) { return e.second == 2; });
    watertight += closed && geometry::is_watertight(mesh) ? 1 : 0;
    const auto stl = geometry::export_mesh(mesh, geometry::MeshFormat::kStlBinary);
    round_trips += geometry::export_mesh(geometry::parse_stl(stl), geometry::MeshFormat::kStlBinary) == stl ? 1 : 0;
  }
  o.require(watertight == 100, std::to_string(watertight) + "/100 watertight");
  o.require(round_trips == 100, std::to_string(round_trips) + "/100 STL round trips");
  o.require(worst_wrap < 1e-9, "wrap discontinuity " + std::to_string(worst_wrap));

  geometry::Spline circle;
  for (int k = 0; k < 64; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 64;
    circle.control_points.emplace_back(std::cos(a), std::sin(a), 0.0);
  }
  const double analytic = 4.0 * std::numbers::pi * std::numbers::pi * 1.0 * 0.1;
  const double area = geometry::surface_area(geometry::extrude_tube(circle, 0.1, 192, 32).mesh);
  const double rel = std::abs(area - analytic) / analytic;
  o.require(rel < 0.01, "torus area off by " + std::to_string(rel));
  o.detail << "100 specs watertight and STL fixpoint, wrap " << worst_wrap << ", torus area error " << 100.0 * rel << "%";
}

// Criterion 7 -----------------------------------------------------------

void dataset_reproducibility(const Workspace& ws, Outcome& o) {
  data::DatasetOptions opts;
  opts.n_a = 179;
  opts.n_b = 176;
  opts.image_size = 400;
  opts.seed = 2023;
  opts.created_at = "2000-01-01T00:00:00Z";
  const fs::path root = ws.root / "full_scale";
  const auto gen_start = Clock::now();
  const auto [a, b] = data::generate_dataset(opts, root);
  const double gen_seconds = seconds_since(gen_start);
  o.require(a.entries.size() == 179 && b.entries.size() == 176, "corpus shape");

  const auto ra = data::read_manifest(data::manifest_path(root, data::Domain::kA));
  const auto rb = data::read_manifest(data::manifest_path(root, data::Domain::kB));
  int identical = 0, checked = 0;
  for (const auto* m : {&ra, &rb}) {
    for (std::size_t i = 0; i < m->entries.size(); i += 7) {
      ++checked;
      const auto on_disk = read_file(root / m->entries[i].file);
      identical += encode_png(data::regenerate_entry(*m, i)) == on_disk ? 1 : 0;
    }
  }
  o.require(identical == checked, std::to_string(identical) + "/" + std::to_string(checked) + " regenerated entries identical");

  const auto [sa, sb] = data::generate_dataset([] {
    data::DatasetOptions s;
    s.n_a = 6;
    s.n_b = 6;
    s.image_size = 64;
    s.seed = 1;
    s.created_at = "2000-01-01T00:00:00Z";
    return s;
  }(), ws.root / "small_repro");
  int small_identical = 0;
  for (const auto* m : {&sa, &sb}) {
    for (std::size_t i = 0; i < m->entries.size(); ++i) {
      small_identical +=
          encode_png(data::regenerate_entry(*m, i)) == read_file(ws.root / "small_repro" / m->entries[i].file) ? 1 : 0;
    }
  }
  o.require(small_identical == 12, std::to_string(small_identical) + "/12 small-corpus entries identical");
  fs::remove_all(root);
  o.detail << "179/176 at 400 px in " << gen_seconds << " s; " << identical << "/" << checked
           << " sampled full-scale entries and 12/12 small entries regenerate byte-identical";
}

// Criterion 8 -----------------------------------------------------------

void service_round_trip(const Workspace& ws, Outcome& o) {
  o.require(g_smoke.ok, "needs the smoke checkpoint");
  if (!g_smoke.ok) return;
  service::ServiceOptions opts;
  opts.data_dir = ws.root / "service";
  opts.checkpoint = g_smoke.checkpoint;
  opts.port = 0;
  opts.image_size = 32;

  std::string id, sketch, render, mesh, record;
  double closest = 1e9;
  {
    service::Service server(opts);
    httplib::Client client("127.0.0.1", server.start());
    const auto health = client.Get("/health");
    o.require(health && health->status == 200, "health");

    const auto created = client.Post("/rings", R"({"seed": 314})", "application/json");
    o.require(created && created->status == 201, "POST /rings");
    if (!created || created->status != 201) return;
    const json body = json::parse(created->body);
    id = body["id"];
    const auto s = client.Get(body["sketch_url"].get<std::string>());
    o.require(s && s->status == 200, "GET sketch");
    sketch = s->body;

    const auto r1 = client.Post("/rings/" + id + "/render", "{}", "application/json");
    o.require(r1 && r1->status == 200, "POST render");
    const std::string render_url = json::parse(r1->body)["render_url"];
    const auto g1 = client.Get(render_url);
    o.require(g1 && g1->status == 200, "GET render");
    render = g1->body;
    const auto r2 = client.Post("/rings/" + id + "/render", "{}", "application/json");
    o.require(r2 && r2->status == 200 && client.Get(render_url)->body == render, "repeated render byte-identical");

    const auto m = client.Get(body["mesh_url"].get<std::string>());
    o.require(m && m->status == 200 && m->body.size() >= 84, "GET mesh");
    mesh = m->body;
    record = client.Get("/rings/" + id)->body;

    const Image img = decode_png(std::vector<std::uint8_t>(render.begin(), render.end()));
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        const Rgb p = img.at(x, y);
        const double dr = 255.0 * p.r - 185, dg = 255.0 * p.g - 226, db = 255.0 * p.b - 234;
        closest = std::min(closest, std::sqrt(dr * dr + dg * dg + db * db));
      }
    }
  }
  service::Service restarted(opts);
  httplib::Client client("127.0.0.1", restarted.start());
  o.require(client.Get("/rings/" + id)->body == record, "record after restart");
  o.require(client.Get("/rings/" + id + "/sketch.png")->body == sketch, "sketch after restart");
  o.require(client.Get("/rings/" + id + "/render.png")->body == render, "render after restart");
  o.require(client.Get("/rings/" + id + "/mesh.stl")->body == mesh, "mesh after restart");
  o.detail << "ring " << id << "; nearest render pixel to #B9E2EA at RGB distance " << closest;
}

// Criterion 9 -----------------------------------------------------------

void checkpoint_round_trip(const Workspace& ws, Outcome& o) {
  gan::TrainConfig config = gan::TrainConfig::smoke(32);
  config.seed = 23;
  gan::Trainer trainer(config);
  Rng rng(1);
  Tensorf a = Tensorf::zeros({1, 3, 32, 32}), b = Tensorf::zeros({1, 3, 32, 32});
  for (float& v : a.data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (float& v : b.data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (int i = 0; i < 3; ++i) trainer.train_step(a, b, 0);

  const Image sketch = data::make_sketch(geometry::generate_ring(geometry::RingSpec{}), 0, 32);
  const fs::path path = ws.root / "roundtrip.ckpt";
  tensor::save_checkpoint(path, trainer.checkpoint());

  const gan::InferenceModel in_memory(trainer.checkpoint());
  const gan::InferenceModel loaded = gan::InferenceModel::load(path);
  const Image x = in_memory.infer(sketch);
  const Image y = loaded.infer(sketch);
  const Image z = loaded.infer(sketch);
  Tensorf direct;
  {
    tensor::NoGradGuard guard;
    direct = trainer.g_ab()(tensor::image_to_tensor(sketch));
  }
  const Image w = tensor::tensor_to_image(direct);
  auto same = [](const Image& p, const Image& q) {
    return p.width() == q.width() && p.height() == q.height() &&
           std::memcmp(p.data().data(), q.data().data(), p.data().size() * sizeof(float)) == 0;
  };
  o.require(same(x, y), "loaded model differs from in-memory model");
  o.require(same(y, z), "repeated inference differs");
  o.require(same(x, w), "inference differs from the trained generator");
  o.require(encode_png(x) == encode_png(y), "PNG bytes differ");
  o.detail << "32x32 render identical across trainer, in-memory and reloaded models";
}

}  // namespace

int main() {
  Workspace ws;
  Report report;
  report.run(1, "gradient-check suite", gradient_checks);
  report.run(2, "loss-formula oracles", loss_oracles);
  report.run(3, "schedule conformance", schedule_conformance);
  report.run(4, "architecture arithmetic", architecture_arithmetic);
  report.run(5, "overfit smoke test", [&](Outcome& o) { overfit_smoke(ws, o); });
  report.run(6, "geometry suite", geometry_suite);
  report.run(7, "dataset reproducibility", [&](Outcome& o) { dataset_reproducibility(ws, o); });
  report.run(8, "service round trip", [&](Outcome& o) { service_round_trip(ws, o); });
  report.run(9, "checkpoint round trip", [&](Outcome& o) { checkpoint_round_trip(ws, o); });
  std::printf("%d/9 criteria passed\n", 9 - report.failures());
  return report.failures() == 0 ? 0 : 1;
}
