#include <CLI11.hpp>

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "ringgan/data/dataset.hpp"
#include "ringgan/data/loader.hpp"
#include "ringgan/data/stream.hpp"
#include "ringgan/error.hpp"
#include "ringgan/gan/inference.hpp"
#include "ringgan/gan/trainer.hpp"
#include "ringgan/geometry/mesh.hpp"
#include "ringgan/geometry/tube.hpp"
#include "ringgan/image_io.hpp"
#include "ringgan/render/rasterizer.hpp"
#include "ringgan/render/scene.hpp"
#include "ringgan/rng.hpp"
#include "ringgan/service/server.hpp"
#include "ringgan/tensor/checkpoint.hpp"

using namespace ringgan;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

struct Common {
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

void add_common(CLI::App* app, Common& common) {
  app->add_option("--seed", common.seed, "Seed for every random choice of this command");
  app->add_flag("-v,--verbose", common.verbose, "Log progress to stderr");
}

// RingSpec from an optional JSON file, then individual flag overrides.
struct SpecFlags {
  std::optional<fs::path> file;
  std::optional<int> n_strands;
  std::optional<int> n_control_points;
  std::optional<double> ring_radius;
  std::optional<double> tube_radius;
  std::optional<double> height_amplitude;
  std::optional<double> radial_amplitude;

  void add(CLI::App* app) {
    app->add_option("--spec", file, "RingSpec JSON file (missing fields keep defaults)")->check(CLI::ExistingFile);
    app->add_option("--n-strands", n_strands, "Override RingSpec.n_strands");
    app->add_option("--n-control-points", n_control_points, "Override RingSpec.n_control_points");
    app->add_option("--ring-radius", ring_radius, "Override RingSpec.ring_radius");
    app->add_option("--tube-radius", tube_radius, "Override RingSpec.tube_radius");
    app->add_option("--height-amplitude", height_amplitude, "Override RingSpec.height_amplitude");
    app->add_option("--radial-amplitude", radial_amplitude, "Override RingSpec.radial_amplitude");
  }

  geometry::RingSpec resolve(const std::optional<std::uint64_t>& seed) const {
    geometry::RingSpec spec;
    if (file) from_json(read_json(*file), spec);
    if (n_strands) spec.n_strands = *n_strands;
    if (n_control_points) spec.n_control_points = *n_control_points;
    if (ring_radius) spec.ring_radius = *ring_radius;
    if (tube_radius) spec.tube_radius = *tube_radius;
    if (height_amplitude) spec.height_amplitude = *height_amplitude;
    if (radial_amplitude) spec.radial_amplitude = *radial_amplitude;
    if (seed) spec.seed = *seed;
    geometry::validate(spec);
    return spec;
  }
};

struct GenDatasetArgs {
  Common common;
  data::DatasetOptions options;
  fs::path out;
  std::optional<fs::path> ranges;
};

int run_gen_dataset(GenDatasetArgs& args) {
  if (args.common.seed) args.options.seed = *args.common.seed;
  if (args.ranges) args.options.ranges = read_json(*args.ranges).get<data::SpecRanges>();
  args.options.validate();
  const auto [a, b] = data::generate_dataset(args.options, args.out);
  std::cout << data::manifest_path(args.out, data::Domain::kA).string() << "\n"
            << data::manifest_path(args.out, data::Domain::kB).string() << "\n";
  if (args.common.verbose) {
    std::cerr << "wrote " << a.entries.size() << " sketches and " << b.entries.size() << " renders at "
              << args.options.image_size << " px\n";
  }
  return 0;
}

struct TrainArgs {
  Common common;
  fs::path dataset;
  fs::path out_checkpoint;
  std::optional<fs::path> config;
  std::optional<fs::path> metrics_log;
  std::optional<int> size;
  std::optional<int> epochs1;
  std::optional<int> epochs2;
  std::optional<double> lr1;
  std::optional<double> lr2;
  std::optional<int> batch_size;
  std::optional<std::int64_t> max_steps;
  std::int64_t checkpoint_every = 100;
  bool smoke = false;
  bool resume = false;
};

int run_train(TrainArgs& args) {
  std::optional<gan::Trainer> trainer;
  if (args.resume) {
    if (!fs::exists(args.out_checkpoint)) {
      throw ValidationError("--resume: no checkpoint at " + args.out_checkpoint.string());
    }
    trainer.emplace(tensor::load_checkpoint(args.out_checkpoint));
  } else {
    gan::TrainConfig config = args.smoke ? gan::TrainConfig::smoke(args.size.value_or(32)) : gan::TrainConfig{};
    if (args.config) config = read_json(*args.config).get<gan::TrainConfig>();
    if (args.size) config.image_size = *args.size;
    if (args.epochs1) config.epochs_phase1 = *args.epochs1;
    if (args.epochs2) config.epochs_phase2 = *args.epochs2;
    if (args.lr1) {
      config.lr_phase1 = *args.lr1;
      if (!args.lr2) config.lr_phase2 = *args.lr1 / 10.0;
    }
    if (args.lr2) config.lr_phase2 = *args.lr2;
    if (args.batch_size) config.batch_size = *args.batch_size;
    if (args.common.seed) config.seed = *args.common.seed;
    config.validate();
    trainer.emplace(config);
  }
  const gan::TrainConfig& config = trainer->config();
  const auto stream = data::UnpairedStream::open(args.dataset, config.seed, config.image_size, config.batch_size);
  if (stream.steps_per_epoch() < 1) throw ValidationError("dataset yields no full batch");

  gan::BatchSource source{[&](int) { return stream.steps_per_epoch(); },
                          [&](int epoch, std::int64_t index) { return stream.batch(epoch, index); }};
  gan::FitOptions fit;
  fit.checkpoint_path = args.out_checkpoint;
  fit.metrics_log = args.metrics_log.value_or(fs::path(args.out_checkpoint.string() + ".metrics.ndjson"));
  fit.checkpoint_every = args.checkpoint_every;
  fit.max_steps = args.max_steps;
  if (args.common.verbose) {
    fit.on_step = [](const gan::StepMetrics& m) { std::cerr << json(m).dump() << "\n"; };
  }
  if (fit.checkpoint_path.has_parent_path()) fs::create_directories(fit.checkpoint_path.parent_path());
  gan::fit(*trainer, source, fit);
  std::cout << args.out_checkpoint.string() << "\n";
  return 0;
}

struct InferArgs {
  Common common;
  fs::path checkpoint;
  fs::path in;
  fs::path out;
};

int run_infer(const InferArgs& args) {
  const auto model = gan::InferenceModel::load(args.checkpoint);
  Image sketch = read_image(args.in);
  const int size = model.image_size();
  if (sketch.width() != size || sketch.height() != size) sketch = data::resize_bilinear(sketch, size, size);
  write_png(args.out, model.infer(sketch));
  return 0;
}

struct RenderArgs {
  Common common;
  SpecFlags spec;
  int size = 256;
  std::optional<std::uint64_t> scene_seed;
  bool grain = false;
  fs::path out;
};

int run_render_classic(const RenderArgs& args) {
  const geometry::RingSpec spec = args.spec.resolve(args.common.seed);
  const std::uint64_t scene_seed = args.scene_seed.value_or(derive_seed(spec.seed, 0, stream_tag("SCENE")));
  if (args.size < 8 || args.size > 4096) throw ValidationError("--size must be in [8, 4096]");
  render::Scene scene = render::make_scene(scene_seed, args.size, args.size, spec.ring_radius);
  if (!args.grain) scene.grain_sigma = 0.0;
  write_png(args.out, render::render_ring(geometry::generate_ring(spec), scene,
                                          derive_seed(scene_seed, 0, stream_tag("GRAIN"))));
  return 0;
}

struct ExportArgs {
  Common common;
  SpecFlags spec;
  std::string format = "stl";
  int n_u = 192;
  int n_v = 16;
  fs::path out;
};

int run_export(const ExportArgs& args) {
  const geometry::RingSpec spec = args.spec.resolve(args.common.seed);
  const auto tube = geometry::ring_mesh(geometry::generate_ring(spec), {args.n_u, args.n_v});
  if (tube.self_intersection_warning) {
    std::cerr << "warning: tube radius reaches the strand curvature radius; the mesh may self-intersect\n";
  }
  const auto format = args.format == "obj" ? geometry::MeshFormat::kObj : geometry::MeshFormat::kStlBinary;
  write_file(args.out, geometry::export_mesh(tube.mesh, format));
  return 0;
}

struct ServeArgs {
  Common common;
  service::ServiceOptions options;
  std::optional<fs::path> checkpoint;
};

service::Service* g_service = nullptr;

int run_serve(ServeArgs& args) {
  args.options.checkpoint = args.checkpoint;
  args.options.seed = args.common.seed;
  service::Service server(args.options);
  g_service = &server;
  std::signal(SIGINT, [](int) {
    if (g_service) g_service->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_service) g_service->stop();
  });
  if (args.common.verbose) {
    std::cerr << "serving " << args.options.data_dir.string() << " on " << args.options.host << ":"
              << args.options.port << "\n";
  }
  server.run();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural ring generation, unpaired sketch-to-render training and serving"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(data::kGeneratorVersion));

  GenDatasetArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Generate an unpaired sketch/render corpus");
  gen_cmd->add_option("--n-a", gen.options.n_a, "Number of sketches (domain A)")->capture_default_str();
  gen_cmd->add_option("--n-b", gen.options.n_b, "Number of renders (domain B)")->capture_default_str();
  gen_cmd->add_option("--size", gen.options.image_size, "Square image size in pixels")->capture_default_str();
  gen_cmd->add_option("--threads", gen.options.threads, "Worker threads (0: hardware concurrency)")
      ->capture_default_str();
  gen_cmd->add_option("--ranges", gen.ranges, "SpecRanges JSON file bounding the sampled rings")
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--created-at", gen.options.created_at,
                      "Manifest timestamp (default: SOURCE_DATE_EPOCH, else now)");
  gen_cmd->add_option("-o,--out", gen.out, "Output directory (must not hold a dataset)")->required();
  add_common(gen_cmd, gen.common);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train the sketch-to-render CycleGAN");
  train_cmd->add_option("--dataset", train.dataset, "Dataset directory written by gen-dataset")
      ->required()
      ->check(CLI::ExistingDirectory);
  train_cmd->add_option("--out-checkpoint", train.out_checkpoint, "Checkpoint written periodically and at the end")
      ->required();
  train_cmd->add_option("--config", train.config, "TrainConfig JSON file; flags override it")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--size", train.size, "Training image size (default 64, 32 with --smoke)");
  train_cmd->add_option("--epochs1", train.epochs1, "Epochs at the initial learning rate (default 100)");
  train_cmd->add_option("--epochs2", train.epochs2, "Epochs at the reduced learning rate (default 100)");
  train_cmd->add_option("--lr1", train.lr1, "Initial learning rate (default 0.0002)");
  train_cmd->add_option("--lr2", train.lr2, "Reduced learning rate, lr1 / 10 (default 0.00002)");
  train_cmd->add_option("--batch-size", train.batch_size, "Images per step (default 1)");
  train_cmd->add_option("--metrics-log", train.metrics_log, "NDJSON metrics log (default <out-checkpoint>.metrics.ndjson)");
  train_cmd->add_option("--checkpoint-every", train.checkpoint_every, "Steps between checkpoints")
      ->capture_default_str();
  train_cmd->add_option("--max-steps", train.max_steps, "Stop after this many steps (resumable)");
  train_cmd->add_flag("--smoke", train.smoke, "Narrow networks for quick CPU runs");
  train_cmd->add_flag("--resume", train.resume, "Continue from --out-checkpoint with its recorded config");
  add_common(train_cmd, train.common);

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "Turn a sketch into a render with a trained checkpoint");
  infer_cmd->add_option("--checkpoint", infer.checkpoint, "Training checkpoint")->required()->check(CLI::ExistingFile);
  infer_cmd->add_option("--in", infer.in, "Sketch image (PNG or JPEG), resized to the checkpoint size")
      ->required()
      ->check(CLI::ExistingFile);
  infer_cmd->add_option("-o,--out", infer.out, "Output PNG")->required();
  add_common(infer_cmd, infer.common);

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render-classic", "Render a ring with the software rasterizer");
  render.spec.add(render_cmd);
  render_cmd->add_option("--size", render.size, "Square image size in pixels")->capture_default_str();
  render_cmd->add_option("--scene-seed", render.scene_seed, "Lighting and camera seed (default: derived from the ring seed)");
  render_cmd->add_flag("--grain", render.grain, "Add the film grain used for training renders");
  render_cmd->add_option("-o,--out", render.out, "Output PNG")->required();
  add_common(render_cmd, render.common);

  ExportArgs exp;
  auto* export_cmd = app.add_subcommand("export", "Write a ring mesh as STL or OBJ");
  exp.spec.add(export_cmd);
  export_cmd->add_option("--format", exp.format, "Mesh format")
      ->check(CLI::IsMember({"stl", "obj"}))
      ->capture_default_str();
  export_cmd->add_option("--n-u", exp.n_u, "Samples along each strand")->capture_default_str();
  export_cmd->add_option("--n-v", exp.n_v, "Samples around each tube")->capture_default_str();
  export_cmd->add_option("-o,--out", exp.out, "Output file")->required();
  add_common(export_cmd, exp.common);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--data-dir", serve.options.data_dir, "Ring store directory")
      ->envname("RINGGAN_DATA_DIR")
      ->capture_default_str();
  serve_cmd->add_option("--checkpoint", serve.checkpoint, "Default checkpoint for renders")
      ->envname("RINGGAN_CHECKPOINT")
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--checkpoint-dir", serve.options.checkpoint_dir,
                        "Directory of checkpoints that requests may name (default <data-dir>/checkpoints)")
      ->envname("RINGGAN_CHECKPOINT_DIR");
  serve_cmd->add_option("--host", serve.options.host, "Listen address")->envname("RINGGAN_HOST")->capture_default_str();
  serve_cmd->add_option("--port", serve.options.port, "Listen port (0: any free port)")
      ->envname("RINGGAN_PORT")
      ->capture_default_str();
  serve_cmd->add_option("--image-size", serve.options.image_size, "Sketch and render size in pixels")
      ->envname("RINGGAN_IMAGE_SIZE")
      ->capture_default_str();
  serve_cmd->add_option("--cors-origin", serve.options.cors_origin, "Access-Control-Allow-Origin value")
      ->envname("RINGGAN_CORS_ORIGIN")
      ->capture_default_str();
  add_common(serve_cmd, serve.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen_cmd) return run_gen_dataset(gen);
    if (*train_cmd) return run_train(train);
    if (*infer_cmd) return run_infer(infer);
    if (*render_cmd) return run_render_classic(render);
    if (*export_cmd) return run_export(exp);
    if (*serve_cmd) return run_serve(serve);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
