#include "ringgan/service/server.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "ringgan/error.hpp"
#include "ringgan/gan/inference.hpp"
#include "ringgan/image_io.hpp"

// After Eigen: <resolv.h> defines a _res macro.
#include <httplib.h>

namespace ringgan::service {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<geometry::FieldError> parse_ring_request(const json& body, geometry::RingSpec& spec) {
  std::vector<geometry::FieldError> errors;
  if (!body.is_object()) {
    errors.push_back({"body", "must be a JSON object"});
    return errors;
  }
  for (const auto& [key, value] : body.items()) {
    try {
      geometry::from_json(json{{key, value}}, spec);
    } catch (const ValidationError& e) {
      std::string message = e.what();
      const std::string prefix = "RingSpec." + key + " ";
      if (message.rfind(prefix, 0) == 0) {
        message = message.substr(prefix.size());
      } else {
        message = "is not a RingSpec field";
      }
      errors.push_back({key, message});
    }
  }
  for (auto& e : geometry::spec_errors(spec)) {
    const bool seen = std::any_of(errors.begin(), errors.end(), [&](const auto& x) { return x.field == e.field; });
    if (!seen) errors.push_back(std::move(e));
  }
  return errors;
}

namespace {

constexpr const char* kJson = "application/json";

json error_body(const std::string& message) { return {{"error", message}}; }

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_bytes(httplib::Response& res, const std::vector<std::uint8_t>& bytes, const char* type) {
  res.status = 200;
  res.set_content(reinterpret_cast<const char*>(bytes.data()), bytes.size(), type);
}

json urls(const std::string& id, bool has_render) {
  json j = {{"sketch_url", "/rings/" + id + "/sketch.png"}, {"mesh_url", "/rings/" + id + "/mesh.stl"}};
  j["render_url"] = has_render ? json("/rings/" + id + "/render.png") : json(nullptr);
  return j;
}

json record_body(const RingRecord& r) {
  json j = {{"id", r.id}, {"spec", r.spec}, {"created_at", r.created_at}};
  j.update(urls(r.id, r.has_render));
  return j;
}

bool safe_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return name.find('/') == std::string::npos && name.find('\\') == std::string::npos;
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  RingStore store;
  httplib::Server server;
  std::thread thread;
  int bound_port = -1;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  std::mutex models_mutex;
  std::map<std::string, std::shared_ptr<const gan::InferenceModel>> models;
  std::optional<std::string> default_name;

  std::atomic<std::uint64_t> requests{0};
  std::atomic<std::uint64_t> rings_created{0};
  std::atomic<std::uint64_t> renders{0};
  std::atomic<std::uint64_t> errors_4xx{0};
  std::atomic<std::uint64_t> errors_5xx{0};

  std::mutex seed_mutex;
  std::mt19937_64 seed_source{std::random_device{}()};

  explicit Impl(ServiceOptions opts) : options(std::move(opts)), store(options.data_dir, options.image_size) {
    if (!options.checkpoint_dir) options.checkpoint_dir = options.data_dir / "checkpoints";
    if (options.seed) seed_source.seed(*options.seed);
    if (options.checkpoint) {
      auto model = std::make_shared<const gan::InferenceModel>(gan::InferenceModel::load(*options.checkpoint));
      default_name = options.checkpoint->filename().string();
      models.emplace(*default_name, std::move(model));
    }
    routes();
  }

  std::uint64_t fresh_seed() {
    std::lock_guard lock(seed_mutex);
    return seed_source() >> 11;
  }

  // Returns the model or sets an error response.
  std::shared_ptr<const gan::InferenceModel> model_for(const std::optional<std::string>& requested,
                                                       httplib::Response& res) {
    std::lock_guard lock(models_mutex);
    const std::optional<std::string> name = requested ? requested : default_name;
    if (!name) {
      send_json(res, 503, error_body("no checkpoint loaded"));
      return nullptr;
    }
    if (const auto it = models.find(*name); it != models.end()) return it->second;
    const fs::path path = *options.checkpoint_dir / *name;
    if (!safe_name(*name) || !fs::is_regular_file(path)) {
      send_json(res, 404, error_body("unknown checkpoint '" + *name + "'"));
      return nullptr;
    }
    try {
      auto model = std::make_shared<const gan::InferenceModel>(gan::InferenceModel::load(path));
      models.emplace(*name, model);
      return model;
    } catch (const std::exception& e) {
      send_json(res, 422, error_body("checkpoint '" + *name + "' cannot be loaded: " + e.what()));
      return nullptr;
    }
  }

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      ++requests;
      res.set_header("Access-Control-Allow-Origin", options.cors_origin);
      return httplib::Server::HandlerResponse::Unhandled;
    });
    server.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      if (res.status >= 500) {
        ++errors_5xx;
      } else if (res.status >= 400) {
        ++errors_4xx;
      }
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        send_json(res, 500, error_body(e.what()));
      } catch (...) {
        send_json(res, 500, error_body("internal error"));
      }
    });
    server.Options(R"(.*)", [this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Post("/rings", [this](const httplib::Request& req, httplib::Response& res) {
      json body = json::object();
      if (!req.body.empty()) {
        try {
          body = json::parse(req.body);
        } catch (const json::parse_error& e) {
          send_json(res, 422, {{"errors", json::array({{{"field", "body"}, {"message", e.what()}}})}});
          return;
        }
      }
      geometry::RingSpec spec;
      const bool has_seed = body.is_object() && body.contains("seed");
      const auto errors = parse_ring_request(body, spec);
      if (!errors.empty()) {
        json list = json::array();
        for (const auto& e : errors) list.push_back({{"field", e.field}, {"message", e.message}});
        send_json(res, 422, {{"errors", list}});
        return;
      }
      if (!has_seed) spec.seed = fresh_seed();
      const RingRecord record = store.create(spec);
      ++rings_created;
      res.set_header("Location", "/rings/" + record.id);
      send_json(res, 201, record_body(record));
    });

    server.Get("/rings", [this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& r : store.list()) list.push_back(record_body(r));
      send_json(res, 200, {{"rings", list}});
    });

    server.Get(R"(/rings/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto record = store.get(req.matches[1]);
      if (!record) return send_json(res, 404, error_body("unknown ring"));
      send_json(res, 200, record_body(*record));
    });

    server.Get(R"(/rings/([^/]+)/sketch\.png)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      if (!store.get(id)) return send_json(res, 404, error_body("unknown ring"));
      send_bytes(res, store.sketch_png(id), "image/png");
    });

    server.Get(R"(/rings/([^/]+)/render\.png)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      if (!store.get(id)) return send_json(res, 404, error_body("unknown ring"));
      const auto png = store.render_png(id);
      if (!png) return send_json(res, 404, error_body("ring has not been rendered"));
      send_bytes(res, *png, "image/png");
    });

    server.Get(R"(/rings/([^/]+)/mesh\.stl)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      if (!store.get(id)) return send_json(res, 404, error_body("unknown ring"));
      send_bytes(res, store.mesh_stl(id), "model/stl");
      res.set_header("Content-Disposition", "attachment; filename=\"" + id + ".stl\"");
    });

    server.Post(R"(/rings/([^/]+)/render)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      if (!store.get(id)) return send_json(res, 404, error_body("unknown ring"));
      std::optional<std::string> name;
      if (!req.body.empty()) {
        json body;
        try {
          body = json::parse(req.body);
        } catch (const json::parse_error& e) {
          return send_json(res, 422, error_body(e.what()));
        }
        if (!body.is_object()) return send_json(res, 422, error_body("body must be a JSON object"));
        if (body.contains("checkpoint") && !body["checkpoint"].is_null()) {
          if (!body["checkpoint"].is_string()) return send_json(res, 422, error_body("checkpoint must be a string"));
          name = body["checkpoint"].get<std::string>();
        }
      }
      const auto model = model_for(name, res);
      if (!model) return;
      if (model->image_size() != store.image_size()) {
        return send_json(res, 409, error_body("checkpoint was trained at " + std::to_string(model->image_size()) +
                                              " px but the service serves " + std::to_string(store.image_size()) +
                                              " px"));
      }
      const Image sketch = decode_png(store.sketch_png(id));
      store.put_render(id, encode_png(model->infer(sketch)));
      ++renders;
      send_json(res, 200, {{"render_url", "/rings/" + id + "/render.png"}});
    });

    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      const double uptime =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      std::lock_guard lock(models_mutex);
      const bool ready = default_name.has_value();
      send_json(res, ready ? 200 : 503,
                {{"status", ready ? "ok" : "no checkpoint"},
                 {"checkpoint", ready ? json(*default_name) : json(nullptr)},
                 {"uptime", uptime}});
    });

    server.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200,
                {{"requests", requests.load()},
                 {"rings", store.size()},
                 {"rings_created", rings_created.load()},
                 {"renders", renders.load()},
                 {"mesh_generations", store.mesh_generations()},
                 {"mesh_cache_hits", store.mesh_cache_hits()},
                 {"errors_4xx", errors_4xx.load()},
                 {"errors_5xx", errors_5xx.load()}});
    });
  }

  void bind() {
    if (bound_port >= 0) throw ValidationError("service already started");
    if (options.port == 0) {
      bound_port = server.bind_to_any_port(options.host);
    } else if (server.bind_to_port(options.host, options.port)) {
      bound_port = options.port;
    }
    if (bound_port <= 0) {
      bound_port = -1;
      throw IoError("cannot bind " + options.host + ":" + std::to_string(options.port));
    }
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

int Service::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->bound_port;
}

void Service::run() {
  impl_->bind();
  impl_->server.listen_after_bind();
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Service::port() const { return impl_->bound_port; }

RingStore& Service::store() { return impl_->store; }

const ServiceOptions& Service::options() const { return impl_->options; }

}  // namespace ringgan::service
