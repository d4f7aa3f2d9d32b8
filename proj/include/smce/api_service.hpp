#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>

#include <json.hpp>

#include "smce/catalog_store.hpp"
#include "smce/enforcement.hpp"
#include "smce/rule_catalog.hpp"

namespace smce {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

struct ApiConfig {
  int port = 8080;
  std::string host = "127.0.0.1";
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> ui_dir;
};

// Flags first, then SMCE_PORT / SMCE_DATA, then defaults.
ApiConfig resolve_config(std::optional<int> port, std::optional<std::string> data_dir,
                         std::optional<std::string> ui_dir = std::nullopt);

class ApiService {
 public:
  explicit ApiService(Metacatalog meta, const RuleCatalog& cat = default_catalog(),
                      std::optional<std::filesystem::path> data_dir = std::nullopt);
  // Loads every database file in the directory (which may be empty or missing).
  static ApiService open(const std::filesystem::path& data_dir, const RuleCatalog& cat = default_catalog());

  ApiResponse handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query = {}, std::string_view body = {});

  std::shared_ptr<const Metacatalog> snapshot() const;

 private:
  ApiResponse get(const std::vector<std::string>& parts, const std::map<std::string, std::string>& query);
  ApiResponse post(const std::vector<std::string>& parts, const nlohmann::json& body);
  ApiResponse put(const std::vector<std::string>& parts, const nlohmann::json& body);
  ApiResponse del(const std::vector<std::string>& parts);

  // Applies fn to a private copy; publishes and persists it only when fn returns true.
  template <class Fn>
  ApiResponse mutate(Fn&& fn);

  const RuleCatalog& cat_;
  std::optional<std::filesystem::path> data_dir_;
  mutable std::mutex snapshot_mu_;
  std::mutex writer_mu_;
  std::shared_ptr<const Metacatalog> meta_;
};

nlohmann::json constraint_state_view(const Metacatalog& meta, MappingId id);

// Blocks until the server stops or `stop` is requested.
int serve(ApiService& api, const ApiConfig& cfg, std::stop_token stop = {});

}  // namespace smce
