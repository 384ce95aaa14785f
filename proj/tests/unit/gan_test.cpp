#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "ringgan/error.hpp"
#include "ringgan/gan/history_buffer.hpp"
#include "ringgan/gan/inference.hpp"
#include "ringgan/gan/losses.hpp"
#include "ringgan/gan/networks.hpp"
#include "ringgan/gan/trainer.hpp"
#include "ringgan/tensor/image_tensor.hpp"
#include "support/gradcheck.hpp"

using namespace ringgan;
using namespace ringgan::gan;
using tensor::Shape;
using tensor::Tensord;
using tensor::Tensorf;
using ringgan::testing::random_tensor;

namespace {

Tensorf random_image(Rng& rng, int size) {
  std::vector<float> v(static_cast<std::size_t>(3 * size * size));
  for (float& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
  return Tensorf::from_data({1, 3, size, size}, std::move(v));
}

TrainConfig tiny_config() {
  TrainConfig c;
  c.image_size = 32;
  c.epochs_phase1 = 2;
  c.epochs_phase2 = 1;
  c.lr_phase1 = 0.001;
  c.lr_phase2 = 0.0001;
  c.history_buffer_size = 3;
  c.generator.base_channels = 4;
  c.generator.n_res_blocks = 1;
  c.discriminator.base_channels = 4;
  c.seed = 11;
  return c;
}

bool same_values(const Tensorf& a, const Tensorf& b) {
  return a.shape() == b.shape() && std::equal(a.data().begin(), a.data().end(), b.data().begin());
}

// Elementwise stand-in generators with closed forms for scalar oracles.
double fa(double v) { return std::tanh(0.7 * v + 0.1); }
double fb(double v) { return std::tanh(1.3 * v - 0.2); }
const Network<double> kGa = [](const Tensord& x) { return tensor::tanh(tensor::add_scalar(tensor::mul_scalar(x, 0.7), 0.1)); };
const Network<double> kGb = [](const Tensord& x) { return tensor::tanh(tensor::add_scalar(tensor::mul_scalar(x, 1.3), -0.2)); };
const Network<double> kIdentity = [](const Tensord& x) { return x; };
const Network<double> kNegate = [](const Tensord& x) { return -x; };

double mean_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

std::vector<Tensorf> concat_params(std::vector<Tensorf> a, const std::vector<Tensorf>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<double> values(const Tensord& t) { return {t.data().begin(), t.data().end()}; }

std::vector<double> map(const std::vector<double>& v, double (*f)(double)) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f(v[i]);
  return out;
}

}  // namespace

TEST(GeneratorTest, PreservesShapeAndRange) {
  GeneratorConfig cfg;
  cfg.base_channels = 8;
  Generator g(cfg, 1);
  Rng rng(1);
  tensor::NoGradGuard guard;
  const Tensorf y = g(random_image(rng, 64));
  EXPECT_EQ(y.shape(), (Shape{1, 3, 64, 64}));
  for (float v : y.data()) {
    ASSERT_GT(v, -1.0F);
    ASSERT_LT(v, 1.0F);
  }
  EXPECT_THROW(g(random_image(rng, 30)), ShapeError);
}

TEST(GeneratorTest, RoundTripShapeAcrossSizes) {
  GeneratorConfig cfg;
  cfg.base_channels = 4;
  cfg.n_res_blocks = 1;
  Generator ab(cfg, 1);
  Generator ba(cfg, 2);
  Rng rng(2);
  tensor::NoGradGuard guard;
  for (int size : {8, 16, 20, 36}) {
    const Tensorf x = random_image(rng, size);
    EXPECT_EQ(ba(ab(x)).shape(), x.shape());
  }
}

TEST(GeneratorTest, ZeroedResidualBlockIsIdentity) {
  GeneratorConfig cfg;
  cfg.base_channels = 4;
  cfg.n_res_blocks = 2;
  Generator g(cfg, 5);
  ResidualBlock& block = g.residual_blocks()[1];
  for (Tensorf* t : {&block.conv1.weight, &block.conv1.bias, &block.conv2.weight, &block.conv2.bias}) {
    for (float& v : t->data()) v = 0.0F;
  }
  Rng rng(3);
  std::vector<float> xs(16 * 8 * 8);
  for (float& v : xs) v = static_cast<float>(rng.normal());
  const Tensorf x = Tensorf::from_data({1, 16, 8, 8}, xs);
  EXPECT_TRUE(same_values(block(x), x));

  // A one-block generator sharing every other parameter computes the same map.
  GeneratorConfig one = cfg;
  one.n_res_blocks = 1;
  Generator h(one, 99);
  const auto source = g.named_parameters();
  for (auto& param : h.named_parameters()) {
    const auto it = std::find_if(source.begin(), source.end(), [&](const auto& s) { return s.name == param.name; });
    ASSERT_NE(it, source.end()) << param.name;
    std::copy(it->tensor.data().begin(), it->tensor.data().end(), param.tensor.data().begin());
  }
  const Tensorf img = random_image(rng, 16);
  tensor::NoGradGuard guard;
  EXPECT_TRUE(same_values(g(img), h(img)));
}

TEST(GeneratorTest, NoiseChannel) {
  GeneratorConfig cfg;
  cfg.base_channels = 4;
  cfg.n_res_blocks = 1;
  cfg.noise_channel = true;
  Generator g(cfg, 5);
  Rng rng(1);
  const Tensorf x = random_image(rng, 16);
  tensor::NoGradGuard guard;
  EXPECT_TRUE(same_values(g(x), g(x)));
  Rng z1(1);
  Rng z2(2);
  EXPECT_FALSE(same_values(g.forward(x, &z1), g.forward(x, &z2)));
}

TEST(DiscriminatorTest, PatchSizesMatchShapePropagation) {
  DiscriminatorConfig cfg;
  auto oracle = [](int s) {
    for (int stride : {2, 2, 2, 1, 1}) s = (s + 2 * 1 - 4) / stride + 1;
    return s;
  };
  EXPECT_EQ(cfg.patch_size(256), 30);
  EXPECT_EQ(cfg.patch_size(64), 6);
  for (int s = 17; s <= 400; ++s) ASSERT_EQ(cfg.patch_size(s), std::max(oracle(s), 0)) << s;
}

TEST(DiscriminatorTest, ForwardShapesAndRange) {
  DiscriminatorConfig cfg;
  cfg.base_channels = 4;
  Discriminator d(cfg, 3);
  Rng rng(4);
  tensor::NoGradGuard guard;
  const Tensorf scores = d(random_image(rng, 64));
  EXPECT_EQ(scores.shape(), (Shape{1, 1, 6, 6}));
  for (float v : scores.data()) {
    ASSERT_GT(v, 0.0F);
    ASSERT_LT(v, 1.0F);
  }
  const Tensorf constant = d(Tensorf::full({1, 3, 32, 32}, 0.3F));
  EXPECT_EQ(constant.shape(), (Shape{1, 1, 2, 2}));
  for (float v : constant.data()) EXPECT_TRUE(std::isfinite(v) && v > 0.0F && v < 1.0F);
  EXPECT_THROW(d(random_image(rng, 16)), ShapeError);
}

TEST(LossTest, CycleExamples) {
  Rng rng(7);
  const Tensord x = random_tensor(rng, {2, 3, 8, 8});
  const Tensord y = random_tensor(rng, {2, 3, 8, 8});
  EXPECT_EQ(cycle_loss(kIdentity, kIdentity, x, y).item(), 0.0);
  EXPECT_EQ(cycle_loss(kNegate, kNegate, x, y).item(), 0.0);
  const double oracle = mean_abs_diff(map(map(values(x), fa), fb), values(x)) +
                        mean_abs_diff(map(map(values(y), fb), fa), values(y));
  EXPECT_NEAR(cycle_loss(kGa, kGb, x, y).item(), oracle, 1e-6);
}

TEST(LossTest, IdentityExamples) {
  Rng rng(8);
  const Tensord x = random_tensor(rng, {2, 3, 8, 8});
  const Tensord y = random_tensor(rng, {2, 3, 8, 8});
  EXPECT_EQ(identity_loss(kIdentity, kIdentity, x, y).item(), 0.0);
  const Network<double> shift = [](const Tensord& t) { return tensor::add_scalar(t, 0.1); };
  EXPECT_NEAR(identity_loss(shift, kIdentity, x, y).item(), 0.1, 1e-12);
  const double oracle = mean_abs_diff(map(values(y), fa), values(y)) + mean_abs_diff(map(values(x), fb), values(x));
  EXPECT_NEAR(identity_loss(kGa, kGb, x, y).item(), oracle, 1e-6);
}

TEST(LossTest, AdversarialExamples) {
  const Network<double> half = [](const Tensord& t) { return tensor::add_scalar(tensor::mul_scalar(t, 0.0), 0.5); };
  const Tensord img = Tensord::zeros({1, 3, 8, 8});
  const auto constant = adversarial_losses(half, img, img);
  EXPECT_NEAR(constant.d_loss.item(), 0.5 * 2.0 * std::numbers::ln2, 1e-12);
  EXPECT_NEAR(constant.g_loss.item(), std::numbers::ln2, 1e-12);

  const double eps = 1e-4;
  const Tensord real = Tensord::full({1, 1, 4, 4}, 1.0);
  const Tensord fake = Tensord::full({1, 1, 4, 4}, -1.0);
  const Network<double> perfect = [eps](const Tensord& t) {
    return tensor::add_scalar(tensor::mul_scalar(t, 0.5 - eps), 0.5);
  };
  EXPECT_LT(adversarial_losses(perfect, real, fake).d_loss.item(), 2e-4);

  Rng rng(9);
  const Tensord r = random_tensor(rng, {2, 3, 8, 8});
  const Tensord f = random_tensor(rng, {2, 3, 8, 8});
  const Network<double> d = [](const Tensord& t) { return tensor::sigmoid(tensor::mul_scalar(t, 2.0)); };
  double real_term = 0.0;
  double fake_term = 0.0;
  double gen_term = 0.0;
  for (std::size_t i = 0; i < r.data().size(); ++i) {
    const double pr = 1.0 / (1.0 + std::exp(-2.0 * r.data()[i]));
    const double pf = 1.0 / (1.0 + std::exp(-2.0 * f.data()[i]));
    real_term -= std::log(pr);
    fake_term -= std::log(1.0 - pf);
    gen_term -= std::log(pf);
  }
  const double n = static_cast<double>(r.numel());
  const auto losses = adversarial_losses(d, r, f);
  EXPECT_NEAR(losses.d_loss.item(), 0.5 * (real_term / n + fake_term / n), 1e-6);
  EXPECT_NEAR(losses.g_loss.item(), gen_term / n, 1e-6);
  EXPECT_NEAR(discriminator_loss(d, r, f, 1.0).item(), real_term / n + fake_term / n, 1e-6);

  const auto ls = adversarial_losses(d, r, f, 0.5, AdversarialMode::kLeastSquares);
  double ls_oracle = 0.0;
  for (std::size_t i = 0; i < r.data().size(); ++i) {
    const double pr = 1.0 / (1.0 + std::exp(-2.0 * r.data()[i]));
    const double pf = 1.0 / (1.0 + std::exp(-2.0 * f.data()[i]));
    ls_oracle += (pr - 1.0) * (pr - 1.0) + pf * pf;
  }
  EXPECT_NEAR(ls.d_loss.item(), 0.5 * ls_oracle / n, 1e-9);
}

TEST(LossTest, DiscriminatorLossDoesNotReachGenerator) {
  Tensord w = Tensord::full({1, 3, 4, 4}, 0.5, true);
  const Tensord x = Tensord::full({1, 3, 4, 4}, 1.0);
  Tensord v = Tensord::full({1, 3, 4, 4}, 2.0, true);
  const Network<double> d = [&v](const Tensord& t) { return tensor::sigmoid(tensor::mul(t, v)); };
  discriminator_loss(d, x, tensor::mul(w, x)).backward();
  EXPECT_FALSE(w.has_grad());
  EXPECT_TRUE(v.has_grad());
}

TEST(LossTest, TotalExamples) {
  auto s = [](double v) { return Tensord::scalar(v); };
  EXPECT_EQ(total_generator_loss(s(0), s(0), s(0), s(0)).item(), 0.0);
  EXPECT_NEAR(total_generator_loss(s(0.5), s(0.5), s(0.2), s(1.0)).item(), 3.1, 1e-12);
}

TEST(LossTest, TotalGradientIsWeightedSumAndLinearInLambda) {
  Rng rng(10);
  const Tensord x = random_tensor(rng, {1, 3, 4, 4});
  const Tensord y = random_tensor(rng, {1, 3, 4, 4});
  Tensord w = random_tensor(rng, {1, 3, 4, 4}, 0.5, 1.5);
  w.set_requires_grad(true);
  const Network<double> g_ab = [&w](const Tensord& t) { return tensor::tanh(tensor::mul(t, w)); };
  const Network<double> g_ba = [](const Tensord& t) { return tensor::tanh(tensor::mul_scalar(t, 0.9)); };
  const Network<double> d = [](const Tensord& t) { return tensor::sigmoid(t); };

  auto grad_of = [&](const std::function<Tensord()>& f) {
    w.zero_grad();
    f().backward();
    return std::vector<double>(w.grad().begin(), w.grad().end());
  };
  const auto g_adv = grad_of([&] { return generator_adversarial_loss(d, g_ab(x)); });
  const auto g_cyc = grad_of([&] { return cycle_loss(g_ab, g_ba, x, y); });
  const auto g_id = grad_of([&] { return identity_loss(g_ab, g_ba, x, y); });
  auto total_grad = [&](LossWeights weights) {
    return grad_of([&] {
      return total_generator_loss(generator_adversarial_loss(d, g_ab(x)), generator_adversarial_loss(d, g_ba(y)),
                                  cycle_loss(g_ab, g_ba, x, y), identity_loss(g_ab, g_ba, x, y), weights);
    });
  };
  const auto g_total = total_grad({});
  for (std::size_t i = 0; i < g_total.size(); ++i) {
    EXPECT_NEAR(g_total[i], g_adv[i] + 10.0 * g_cyc[i] + 0.1 * g_id[i], 1e-6);
  }
  const auto g_double = total_grad({20.0, 0.1});
  for (std::size_t i = 0; i < g_total.size(); ++i) {
    EXPECT_NEAR(g_double[i] - g_total[i], 10.0 * g_cyc[i], 1e-9);
  }
}

TEST(ScheduleTest, DefaultValues) {
  const TrainConfig cfg;
  for (int e = 0; e < 100; ++e) ASSERT_EQ(lr_schedule(e, cfg), 0.0002) << e;
  for (int e = 100; e < 200; ++e) ASSERT_EQ(lr_schedule(e, cfg), 0.00002) << e;
  EXPECT_THROW(lr_schedule(200, cfg), ValidationError);
  EXPECT_THROW(lr_schedule(-1, cfg), ValidationError);
}

TEST(TrainConfigTest, ValidationAndJson) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  TrainConfig bad = cfg;
  bad.lr_phase2 = 0.0001;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = cfg;
  bad.image_size = 16;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = cfg;
  bad.image_size = 66;
  EXPECT_THROW(bad.validate(), ValidationError);

  const TrainConfig smoke = TrainConfig::smoke();
  const TrainConfig back = nlohmann::json(smoke).get<TrainConfig>();
  EXPECT_EQ(nlohmann::json(back), nlohmann::json(smoke));
  EXPECT_THROW(nlohmann::json({{"epochs", 3}}).get<TrainConfig>(), ValidationError);
}

TEST(HistoryBufferTest, FillsThenSwapsWithEvenOdds) {
  HistoryBuffer pass(0, 1);
  const Tensorf img = Tensorf::full({1}, 1.0F);
  EXPECT_TRUE(same_values(pass.query(img), img));
  EXPECT_EQ(pass.size(), 0U);

  HistoryBuffer pool(50, 42);
  for (int i = 0; i < 50; ++i) {
    const Tensorf t = Tensorf::full({1}, static_cast<float>(i));
    EXPECT_EQ(pool.query(t).item(), static_cast<float>(i));
  }
  EXPECT_EQ(pool.size(), 50U);
  int fresh = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const float tag = static_cast<float>(1000 + i);
    fresh += pool.query(Tensorf::full({1}, tag)).item() == tag;
    ASSERT_EQ(pool.size(), 50U);
  }
  EXPECT_NEAR(static_cast<double>(fresh) / n, 0.5, 0.02);
}

TEST(HistoryBufferTest, RestoreContinuesIdentically) {
  HistoryBuffer a(4, 9);
  for (int i = 0; i < 6; ++i) a.query(Tensorf::full({1}, static_cast<float>(i)));
  HistoryBuffer b(4, 123);
  b.restore(a.images(), a.rng_state());
  for (int i = 0; i < 20; ++i) {
    const Tensorf t = Tensorf::full({1}, static_cast<float>(100 + i));
    ASSERT_EQ(a.query(t).item(), b.query(t).item());
  }
}

TEST(TrainerTest, DeterministicSteps) {
  Rng rng(1);
  const Tensorf a = random_image(rng, 32);
  const Tensorf b = random_image(rng, 32);
  Trainer t1(tiny_config());
  Trainer t2(tiny_config());
  for (int i = 0; i < 2; ++i) EXPECT_EQ(t1.train_step(a, b, 0), t2.train_step(a, b, 0));
}

TEST(TrainerTest, GeneratorPhaseLeavesDiscriminatorsUntouched) {
  Rng rng(2);
  const Tensorf a = random_image(rng, 32);
  const Tensorf b = random_image(rng, 32);
  Trainer t(tiny_config());
  auto snapshot = [](const std::vector<Tensorf>& params) {
    std::vector<std::vector<float>> out;
    for (const auto& p : params) out.emplace_back(p.data().begin(), p.data().end());
    return out;
  };
  const auto d_before = snapshot(concat_params(t.d_a().parameters(), t.d_b().parameters()));
  const auto g_before = snapshot(t.g_ab().parameters());
  StepMetrics m = t.generator_phase(a, b, 0);
  EXPECT_EQ(snapshot(concat_params(t.d_a().parameters(), t.d_b().parameters())), d_before);
  EXPECT_NE(snapshot(t.g_ab().parameters()), g_before);
  t.discriminator_phase(a, b, m);
  EXPECT_NE(snapshot(concat_params(t.d_a().parameters(), t.d_b().parameters())), d_before);
  EXPECT_EQ(t.step(), 1);
  for (double v : {m.gan_ab, m.gan_ba, m.cycle, m.identity, m.g_total, m.d_a, m.d_b}) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, 0.0);
  }
}

TEST(TrainerTest, NonFiniteLossNamesTermAndKeepsParameters) {
  Rng rng(3);
  Tensorf a = random_image(rng, 32);
  const Tensorf b = random_image(rng, 32);
  Trainer t(tiny_config());
  const std::vector<float> before(t.g_ab().parameters()[0].data().begin(), t.g_ab().parameters()[0].data().end());
  a.data()[5] = std::numeric_limits<float>::quiet_NaN();
  try {
    t.train_step(a, b, 0);
    FAIL() << "expected NonFiniteLoss";
  } catch (const NonFiniteLoss& e) {
    EXPECT_FALSE(e.term().empty());
    EXPECT_NE(std::string(e.what()).find(e.term()), std::string::npos);
  }
  const auto after = t.g_ab().parameters()[0].data();
  EXPECT_TRUE(std::equal(before.begin(), before.end(), after.begin()));
}

TEST(TrainerTest, CheckpointResumeIsBitIdentical) {
  Rng rng(4);
  std::vector<std::pair<Tensorf, Tensorf>> batches;
  for (int i = 0; i < 6; ++i) batches.emplace_back(random_image(rng, 32), random_image(rng, 32));
  Trainer straight(tiny_config());
  for (int i = 0; i < 3; ++i) straight.train_step(batches[i].first, batches[i].second, 0);
  const auto bytes = tensor::serialize_checkpoint(straight.checkpoint());
  Trainer resumed(tensor::deserialize_checkpoint(bytes));
  EXPECT_EQ(resumed.step(), 3);
  for (int i = 3; i < 6; ++i) {
    ASSERT_EQ(straight.train_step(batches[i].first, batches[i].second, 1),
              resumed.train_step(batches[i].first, batches[i].second, 1));
  }
  EXPECT_EQ(tensor::serialize_checkpoint(straight.checkpoint()), tensor::serialize_checkpoint(resumed.checkpoint()));
}

TEST(FitTest, RunsScheduleLogsAndResumes) {
  const auto dir = std::filesystem::temp_directory_path() / "ringgan_fit_test";
  std::filesystem::remove_all(dir);
  Rng rng(5);
  std::vector<std::pair<Tensorf, Tensorf>> data;
  for (int i = 0; i < 2; ++i) data.emplace_back(random_image(rng, 32), random_image(rng, 32));
  BatchSource source{[](int) { return std::int64_t{2}; },
                     [&](int, std::int64_t i) { return data[static_cast<std::size_t>(i)]; }};

  std::vector<StepMetrics> full;
  Trainer reference(tiny_config());
  fit(reference, source, {dir / "ref.ckpt", dir / "ref.ndjson", 100, std::nullopt,
                          [&](const StepMetrics& m) { full.push_back(m); }});
  ASSERT_EQ(full.size(), 6U);
  EXPECT_EQ(full[3].lr, 0.001);
  EXPECT_EQ(full[4].lr, 0.0001);

  std::vector<StepMetrics> parts;
  {
    Trainer first(tiny_config());
    fit(first, source, {dir / "run.ckpt", dir / "run.ndjson", 100, 3, [&](const StepMetrics& m) { parts.push_back(m); }});
  }
  Trainer second(tensor::load_checkpoint(dir / "run.ckpt"));
  EXPECT_EQ(second.position().epoch, 1);
  EXPECT_EQ(second.position().index, 1);
  fit(second, source, {dir / "run.ckpt", dir / "run.ndjson", 100, std::nullopt,
                       [&](const StepMetrics& m) { parts.push_back(m); }});
  EXPECT_EQ(parts, full);

  std::ifstream log(dir / "run.ndjson");
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("step").get<int>(), ++lines);
  }
  EXPECT_EQ(lines, 6);
  std::filesystem::remove_all(dir);
}

TEST(InferenceTest, DeterministicAndRoundTrips) {
  Trainer t(tiny_config());
  Rng rng(6);
  t.train_step(random_image(rng, 32), random_image(rng, 32), 0);
  Image sketch(32, 32, {1.0F, 1.0F, 1.0F});
  for (int i = 4; i < 28; ++i) sketch.set(i, i, {0.2F, 0.2F, 0.2F});

  const InferenceModel model(t.checkpoint());
  const Image out = model.infer(sketch);
  EXPECT_EQ(out.width(), 32);
  EXPECT_EQ(out.height(), 32);
  EXPECT_EQ(model.infer(sketch), out);
  EXPECT_EQ(model.image_size(), 32);

  const InferenceModel reloaded(tensor::deserialize_checkpoint(tensor::serialize_checkpoint(t.checkpoint())));
  EXPECT_EQ(reloaded.infer(sketch), out);
}

TEST(InferenceTest, ConfigMismatchListsShapes) {
  Trainer t(tiny_config());
  GeneratorConfig other = tiny_config().generator;
  other.base_channels = 8;
  try {
    InferenceModel model(t.checkpoint(), other);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("expected [8,3,7,7]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("found [4,3,7,7]"), std::string::npos) << msg;
  }
}

TEST(ImageTensorTest, EndpointsMap) {
  Image img(2, 1);
  img.set(0, 0, {1.0F, 1.0F, 1.0F});
  img.set(1, 0, {0.0F, 0.0F, 0.0F});
  const Tensorf t = tensor::image_to_tensor(img);
  EXPECT_EQ(t.shape(), (Shape{1, 3, 1, 2}));
  EXPECT_EQ(t.data()[0], 1.0F);
  EXPECT_EQ(t.data()[1], -1.0F);
  EXPECT_EQ(tensor::tensor_to_image(t), img);
}
