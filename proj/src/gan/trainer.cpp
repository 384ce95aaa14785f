#include "ringgan/gan/trainer.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ringgan/error.hpp"

namespace ringgan::gan {

using tensor::Checkpoint;
using tensor::Tensorf;

void TrainConfig::validate() const {
  if (epochs_phase1 < 0 || epochs_phase2 < 0) throw ValidationError("epoch counts must be >= 0");
  if (total_epochs() < 1) throw ValidationError("training needs at least one epoch");
  if (!(lr_phase1 > 0.0) || !std::isfinite(lr_phase1)) throw ValidationError("lr_phase1 must be > 0");
  if (!(lr_phase2 > 0.0) || !std::isfinite(lr_phase2)) throw ValidationError("lr_phase2 must be > 0");
  if (std::abs(lr_phase2 - lr_phase1 / 10.0) > 1e-9 * lr_phase1) {
    throw ValidationError("lr_phase2 must equal lr_phase1 / 10");
  }
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(d_loss_scale > 0.0) || !std::isfinite(d_loss_scale)) throw ValidationError("d_loss_scale must be > 0");
  if (history_buffer_size < 0) throw ValidationError("history_buffer_size must be >= 0");
  weights.validate();
  generator.validate();
  discriminator.validate();
  if (generator.in_channels != 3 || generator.out_channels != 3 || discriminator.in_channels != 3) {
    throw ValidationError("generators and discriminators must map RGB images");
  }
  const int factor = 1 << generator.n_downsample;
  if (image_size < 1 || image_size % factor != 0) {
    throw ValidationError("image_size must be a positive multiple of " + std::to_string(factor));
  }
  if (discriminator.patch_size(image_size) < 1) {
    throw ValidationError("image_size " + std::to_string(image_size) + " is too small for the discriminator");
  }
}

TrainConfig TrainConfig::smoke(int image_size) {
  TrainConfig c;
  c.image_size = image_size;
  c.generator.base_channels = 16;
  c.discriminator.base_channels = 16;
  return c;
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = {{"epochs_phase1", c.epochs_phase1},
       {"epochs_phase2", c.epochs_phase2},
       {"lr_phase1", c.lr_phase1},
       {"lr_phase2", c.lr_phase2},
       {"batch_size", c.batch_size},
       {"d_loss_scale", c.d_loss_scale},
       {"history_buffer_size", c.history_buffer_size},
       {"image_size", c.image_size},
       {"seed", c.seed},
       {"weights", c.weights},
       {"adversarial", c.adversarial == AdversarialMode::kBce ? "bce" : "lsgan"},
       {"generator", c.generator},
       {"discriminator", c.discriminator}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  if (!j.is_object()) throw ValidationError("training config must be a JSON object");
  static const std::set<std::string> known = {"epochs_phase1", "epochs_phase2", "lr_phase1",  "lr_phase2",
                                              "batch_size",    "d_loss_scale",  "history_buffer_size",
                                              "image_size",    "seed",          "weights",    "adversarial",
                                              "generator",     "discriminator"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ValidationError("unknown training config field '" + key + "'");
  }
  try {
    TrainConfig d;
    c.epochs_phase1 = j.value("epochs_phase1", d.epochs_phase1);
    c.epochs_phase2 = j.value("epochs_phase2", d.epochs_phase2);
    c.lr_phase1 = j.value("lr_phase1", d.lr_phase1);
    c.lr_phase2 = j.value("lr_phase2", d.lr_phase2);
    c.batch_size = j.value("batch_size", d.batch_size);
    c.d_loss_scale = j.value("d_loss_scale", d.d_loss_scale);
    c.history_buffer_size = j.value("history_buffer_size", d.history_buffer_size);
    c.image_size = j.value("image_size", d.image_size);
    c.seed = j.value("seed", d.seed);
    c.weights = j.value("weights", d.weights);
    c.generator = j.value("generator", d.generator);
    c.discriminator = j.value("discriminator", d.discriminator);
    const std::string mode = j.value("adversarial", std::string("bce"));
    if (mode != "bce" && mode != "lsgan") throw ValidationError("adversarial must be \"bce\" or \"lsgan\"");
    c.adversarial = mode == "bce" ? AdversarialMode::kBce : AdversarialMode::kLeastSquares;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("training config: ") + e.what());
  }
}

double lr_schedule(int epoch, const TrainConfig& config) {
  if (epoch < 0 || epoch >= config.total_epochs()) {
    throw ValidationError("epoch " + std::to_string(epoch) + " outside schedule [0, " +
                          std::to_string(config.total_epochs()) + ")");
  }
  return epoch < config.epochs_phase1 ? config.lr_phase1 : config.lr_phase2;
}

namespace {

std::string describe_non_finite(const std::string& term, std::int64_t step, double value) {
  std::ostringstream os;
  os << "non-finite loss term '" << term << "' (" << value << ") at step " << step;
  return os.str();
}

}  // namespace

NonFiniteLoss::NonFiniteLoss(const std::string& term, std::int64_t step, double value)
    : std::runtime_error(describe_non_finite(term, step, value)), term_(term) {}

void to_json(nlohmann::json& j, const StepMetrics& m) {
  j = {{"epoch", m.epoch},   {"step", m.step},       {"lr", m.lr},           {"gan_ab", m.gan_ab},
       {"gan_ba", m.gan_ba}, {"cycle", m.cycle},     {"identity", m.identity}, {"g_total", m.g_total},
       {"d_a", m.d_a},       {"d_b", m.d_b}};
}

namespace {

std::vector<Tensorf> concat(std::vector<Tensorf> a, const std::vector<Tensorf>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const TrainConfig& validated(const TrainConfig& c) {
  c.validate();
  return c;
}

void check_finite(const char* term, const Tensorf& loss, std::int64_t step) {
  const double v = loss.item();
  if (!std::isfinite(v)) throw NonFiniteLoss(term, step, v);
}

void add_named(Checkpoint& ck, const std::string& prefix, const std::vector<tensor::NamedTensor>& named) {
  for (const auto& n : named) ck.tensors.push_back({prefix + n.name, n.tensor.detach()});
}

void add_adam(Checkpoint& ck, nlohmann::json& meta, const std::string& name, const tensor::Adam<float>& opt,
              const std::vector<Tensorf>& params) {
  const auto& st = opt.state();
  meta[name] = st.step;
  for (std::size_t i = 0; i < st.first_moment.size(); ++i) {
    ck.tensors.push_back({name + ".m/" + std::to_string(i), Tensorf::from_data(params[i].shape(), st.first_moment[i])});
    ck.tensors.push_back({name + ".v/" + std::to_string(i), Tensorf::from_data(params[i].shape(), st.second_moment[i])});
  }
}

void restore_adam(const Checkpoint& ck, const nlohmann::json& meta, const std::string& name,
                  tensor::Adam<float>& opt) {
  auto& st = opt.state();
  st.step = meta.at(name).get<std::int64_t>();
  st.first_moment.clear();
  st.second_moment.clear();
  if (st.step == 0) return;
  for (std::size_t i = 0; i < opt.params().size(); ++i) {
    const Tensorf& m = ck.at(name + ".m/" + std::to_string(i));
    const Tensorf& v = ck.at(name + ".v/" + std::to_string(i));
    if (m.shape() != opt.params()[i].shape() || v.shape() != opt.params()[i].shape()) {
      throw ShapeError("checkpoint optimizer state " + name + " does not match parameter " + std::to_string(i));
    }
    st.first_moment.emplace_back(m.data().begin(), m.data().end());
    st.second_moment.emplace_back(v.data().begin(), v.data().end());
  }
}

void add_pool(Checkpoint& ck, nlohmann::json& meta, const std::string& name, const HistoryBuffer& pool) {
  meta[name] = {{"size", pool.size()}, {"rng", pool.rng_state()}};
  for (std::size_t i = 0; i < pool.size(); ++i) ck.tensors.push_back({name + "/" + std::to_string(i), pool.images()[i]});
}

void restore_pool(const Checkpoint& ck, const nlohmann::json& meta, const std::string& name, HistoryBuffer& pool) {
  const auto n = meta.at(name).at("size").get<std::size_t>();
  std::vector<Tensorf> images;
  for (std::size_t i = 0; i < n; ++i) images.push_back(ck.at(name + "/" + std::to_string(i)).detach());
  pool.restore(std::move(images), meta.at(name).at("rng").get<std::string>());
}

}  // namespace

Trainer::Trainer(const TrainConfig& config)
    : config_(validated(config)),
      g_ab_(config_.generator, derive_seed(config_.seed, 0, stream_tag("G_AB"))),
      g_ba_(config_.generator, derive_seed(config_.seed, 0, stream_tag("G_BA"))),
      d_a_(config_.discriminator, derive_seed(config_.seed, 0, stream_tag("D_A"))),
      d_b_(config_.discriminator, derive_seed(config_.seed, 0, stream_tag("D_B"))),
      g_opt_(concat(g_ab_.parameters(), g_ba_.parameters())),
      d_a_opt_(d_a_.parameters()),
      d_b_opt_(d_b_.parameters()),
      pool_a_(static_cast<std::size_t>(config_.history_buffer_size), derive_seed(config_.seed, 0, stream_tag("POLA"))),
      pool_b_(static_cast<std::size_t>(config_.history_buffer_size), derive_seed(config_.seed, 0, stream_tag("POLB"))),
      noise_rng_(derive_seed(config_.seed, 0, stream_tag("NOIS"))) {}

Trainer::Trainer(const Checkpoint& checkpoint)
    : Trainer(checkpoint.metadata.at("config").get<TrainConfig>()) {
  restore(checkpoint);
}

StepMetrics Trainer::generator_phase(const Tensorf& a, const Tensorf& b, int epoch) {
  StepMetrics m;
  m.epoch = epoch;
  m.step = step_ + 1;
  m.lr = lr_schedule(epoch, config_);
  const Network<float> G_ab = [this](const Tensorf& x) { return g_ab_.forward(x, &noise_rng_); };
  const Network<float> G_ba = [this](const Tensorf& x) { return g_ba_.forward(x, &noise_rng_); };
  const Network<float> D_a = [this](const Tensorf& x) { return d_a_(x); };
  const Network<float> D_b = [this](const Tensorf& x) { return d_b_(x); };

  g_opt_.zero_grad();
  const Tensorf fake_b = G_ab(a);
  const Tensorf fake_a = G_ba(b);
  const Tensorf gan_ab = generator_adversarial_loss(D_b, fake_b, config_.adversarial);
  const Tensorf gan_ba = generator_adversarial_loss(D_a, fake_a, config_.adversarial);
  const Tensorf cycle = tensor::l1_loss(G_ba(fake_b), a) + tensor::l1_loss(G_ab(fake_a), b);
  const Tensorf identity = tensor::l1_loss(G_ab(b), b) + tensor::l1_loss(G_ba(a), a);
  const Tensorf total = total_generator_loss(gan_ab, gan_ba, cycle, identity, config_.weights);
  check_finite("gan_ab", gan_ab, m.step);
  check_finite("gan_ba", gan_ba, m.step);
  check_finite("cycle", cycle, m.step);
  check_finite("identity", identity, m.step);
  check_finite("g_total", total, m.step);
  total.backward();
  g_opt_.step(m.lr);

  m.gan_ab = gan_ab.item();
  m.gan_ba = gan_ba.item();
  m.cycle = cycle.item();
  m.identity = identity.item();
  m.g_total = total.item();
  pending_fake_a_ = fake_a.detach();
  pending_fake_b_ = fake_b.detach();
  return m;
}

void Trainer::discriminator_phase(const Tensorf& a, const Tensorf& b, StepMetrics& m) {
  if (!pending_fake_a_.defined()) throw ValidationError("discriminator_phase needs a preceding generator_phase");
  const Network<float> D_a = [this](const Tensorf& x) { return d_a_(x); };
  const Network<float> D_b = [this](const Tensorf& x) { return d_b_(x); };
  d_a_opt_.zero_grad();
  d_b_opt_.zero_grad();
  const Tensorf loss_a =
      discriminator_loss(D_a, a, pool_a_.query(pending_fake_a_), config_.d_loss_scale, config_.adversarial);
  const Tensorf loss_b =
      discriminator_loss(D_b, b, pool_b_.query(pending_fake_b_), config_.d_loss_scale, config_.adversarial);
  pending_fake_a_ = Tensorf();
  pending_fake_b_ = Tensorf();
  check_finite("d_a", loss_a, m.step);
  check_finite("d_b", loss_b, m.step);
  loss_a.backward();
  loss_b.backward();
  d_a_opt_.step(m.lr);
  d_b_opt_.step(m.lr);
  m.d_a = loss_a.item();
  m.d_b = loss_b.item();
  ++step_;
}

StepMetrics Trainer::train_step(const Tensorf& a, const Tensorf& b, int epoch) {
  StepMetrics m = generator_phase(a, b, epoch);
  discriminator_phase(a, b, m);
  return m;
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint ck;
  auto& meta = ck.metadata;
  meta["kind"] = "ringgan-trainer";
  meta["config"] = config_;
  meta["step"] = step_;
  meta["position"] = {{"epoch", position_.epoch}, {"index", position_.index}};
  meta["noise_rng"] = noise_rng_.state();
  add_named(ck, "g_ab/", g_ab_.named_parameters());
  add_named(ck, "g_ba/", g_ba_.named_parameters());
  add_named(ck, "d_a/", d_a_.named_parameters());
  add_named(ck, "d_b/", d_b_.named_parameters());
  add_adam(ck, meta, "adam_g", g_opt_, concat(g_ab_.parameters(), g_ba_.parameters()));
  add_adam(ck, meta, "adam_d_a", d_a_opt_, d_a_.parameters());
  add_adam(ck, meta, "adam_d_b", d_b_opt_, d_b_.parameters());
  add_pool(ck, meta, "pool_a", pool_a_);
  add_pool(ck, meta, "pool_b", pool_b_);
  return ck;
}

void Trainer::restore(const Checkpoint& ck) {
  const auto& meta = ck.metadata;
  if (meta.value("kind", "") != "ringgan-trainer") throw IoError("checkpoint is not a training checkpoint");
  try {
    load_parameters(g_ab_.named_parameters(), ck, "g_ab/");
    load_parameters(g_ba_.named_parameters(), ck, "g_ba/");
    load_parameters(d_a_.named_parameters(), ck, "d_a/");
    load_parameters(d_b_.named_parameters(), ck, "d_b/");
    restore_adam(ck, meta, "adam_g", g_opt_);
    restore_adam(ck, meta, "adam_d_a", d_a_opt_);
    restore_adam(ck, meta, "adam_d_b", d_b_opt_);
    restore_pool(ck, meta, "pool_a", pool_a_);
    restore_pool(ck, meta, "pool_b", pool_b_);
    noise_rng_.restore(meta.at("noise_rng").get<std::string>());
    step_ = meta.at("step").get<std::int64_t>();
    position_ = {meta.at("position").at("epoch").get<int>(), meta.at("position").at("index").get<std::int64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("training checkpoint metadata: ") + e.what());
  }
}

void fit(Trainer& trainer, const BatchSource& source, const FitOptions& options) {
  std::ofstream log;
  if (!options.metrics_log.empty()) {
    if (options.metrics_log.has_parent_path()) std::filesystem::create_directories(options.metrics_log.parent_path());
    log.open(options.metrics_log, std::ios::app);
    if (!log) throw IoError(options.metrics_log.string() + ": cannot open metrics log");
  }
  auto save = [&] {
    if (!options.checkpoint_path.empty()) tensor::save_checkpoint(options.checkpoint_path, trainer.checkpoint());
  };

  std::int64_t done = 0;
  TrainPosition pos = trainer.position();
  const int total_epochs = trainer.config().total_epochs();
  while (pos.epoch < total_epochs) {
    const std::int64_t n = source.steps_in_epoch(pos.epoch);
    if (n < 1) throw ValidationError("epoch " + std::to_string(pos.epoch) + " has no batches");
    while (pos.index < n) {
      if (options.max_steps && done >= *options.max_steps) {
        save();
        return;
      }
      const auto [a, b] = source.batch(pos.epoch, pos.index);
      const StepMetrics m = trainer.train_step(a, b, pos.epoch);
      ++pos.index;
      ++done;
      trainer.set_position(pos);
      if (log.is_open()) log << nlohmann::json(m).dump() << '\n' << std::flush;
      if (options.on_step) options.on_step(m);
      if (options.checkpoint_every > 0 && trainer.step() % options.checkpoint_every == 0 && pos.index < n) save();
    }
    pos = {pos.epoch + 1, 0};
    trainer.set_position(pos);
    save();
  }
}

}  // namespace ringgan::gan
