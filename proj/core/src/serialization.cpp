#include "nucache/serialization.hpp"

#include <stdexcept>

#include "json.hpp"

namespace nucache {

namespace {

using nlohmann::json;

json chain_to_json(const ChainIndex& chain) {
  json j = json::array();
  for (const auto& s : chain.sets) j.push_back(s);
  return j;
}

ChainIndex chain_from_json(const json& j) {
  ChainIndex chain;
  for (const auto& s : j) chain.sets.push_back(s.get<std::vector<int>>());
  return chain;
}

json config_to_json(const PlacementConfig& cfg) {
  return json{{"K", cfg.K},
              {"N", cfg.N},
              {"r", cfg.r},
              {"subfile_len", cfg.subfile_len},
              {"prime", cfg.prime},
              {"matrix_seed", cfg.matrix_seed}};
}

PlacementConfig config_from_json(const json& j) {
  PlacementConfig cfg;
  cfg.K = j.at("K").get<int>();
  cfg.N = j.at("N").get<int>();
  cfg.r = j.at("r").get<std::vector<int>>();
  cfg.subfile_len = j.at("subfile_len").get<int>();
  cfg.prime = j.at("prime").get<std::uint32_t>();
  cfg.matrix_seed = j.at("matrix_seed").get<std::uint32_t>();
  return cfg;
}

json map_to_json_obj(const CacheMap& map, const std::vector<std::vector<Symbol>>* files) {
  json j = config_to_json(map.cfg);
  j["schema_version"] = 1;
  j["kind"] = "placement";
  j["users"] = json::array();
  for (size_t u = 0; u < map.users.size(); ++u) {
    json entries = json::array();
    for (const auto& entry : map.users[u]) {
      json e{{"file", entry.file}, {"chain", chain_to_json(entry.chain)}};
      if (map.has_payloads) e["payload"] = entry.payload;
      entries.push_back(std::move(e));
    }
    j["users"].push_back(json{{"id", static_cast<int>(u) + 1}, {"entries", std::move(entries)}});
  }
  if (files) j["files"] = *files;
  return j;
}

CacheMap map_from_json_obj(const json& j, std::vector<std::vector<Symbol>>* files_out) {
  if (j.at("kind") != "placement") throw std::invalid_argument("expected a placement document");
  CacheMap map;
  map.cfg = config_from_json(j);
  map.cfg.validate();
  map.users.resize(static_cast<size_t>(map.cfg.K));
  map.has_payloads = true;
  for (const auto& user : j.at("users")) {
    int id = user.at("id").get<int>();
    if (id < 1 || id > map.cfg.K) throw std::invalid_argument("placement: bad user id");
    for (const auto& e : user.at("entries")) {
      CacheEntry entry;
      entry.file = e.at("file").get<int>();
      entry.chain = chain_from_json(e.at("chain"));
      if (!chain_valid(entry.chain, map.cfg.K, map.cfg.r))
        throw std::invalid_argument("placement: invalid chain in cache entry");
      if (e.contains("payload"))
        entry.payload = e.at("payload").get<std::vector<Symbol>>();
      else
        map.has_payloads = false;
      map.users[static_cast<size_t>(id - 1)].push_back(std::move(entry));
    }
  }
  if (files_out && j.contains("files"))
    *files_out = j.at("files").get<std::vector<std::vector<Symbol>>>();
  return map;
}

json message_to_json_obj(const DeliveryMessage& msg) {
  json j{{"schema_version", 1},
         {"kind", "message"},
         {"K", msg.K},
         {"r", msg.r},
         {"prime", msg.prime},
         {"subfile_len", msg.subfile_len},
         {"matrix_seed", msg.matrix_seed},
         {"demand", msg.demand}};
  json columns = json::array();
  for (const auto& label : msg.manifest) {
    if (label.coded)
      columns.push_back(json{{"file", label.file},
                             {"rho1", label.key.rho1},
                             {"rho2", label.key.rho2},
                             {"element", label.element}});
    else
      columns.push_back(json{{"file", label.file}, {"chain", label.chain}});
  }
  j["columns"] = std::move(columns);
  json rows = json::array();
  for (int i = 0; i < msg.payload.rows; ++i) {
    json row = json::array();
    for (int c = 0; c < msg.payload.cols; ++c) row.push_back(msg.payload.at(i, c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

DeliveryMessage message_from_json_obj(const json& j) {
  if (j.at("kind") != "message") throw std::invalid_argument("expected a message document");
  DeliveryMessage msg;
  msg.K = j.at("K").get<int>();
  msg.r = j.at("r").get<std::array<int, 2>>();
  msg.prime = j.at("prime").get<std::uint32_t>();
  msg.subfile_len = j.at("subfile_len").get<int>();
  msg.matrix_seed = j.at("matrix_seed").get<std::uint32_t>();
  msg.demand = j.at("demand").get<std::vector<int>>();
  for (const auto& c : j.at("columns")) {
    ColumnLabel label;
    label.file = c.at("file").get<int>();
    if (c.contains("chain")) {
      label.coded = false;
      label.chain = c.at("chain").get<long long>();
    } else {
      label.coded = true;
      label.key.rho1 = c.at("rho1").get<std::vector<int>>();
      label.key.rho2 = c.at("rho2").get<std::vector<int>>();
      label.element = c.at("element").get<int>();
    }
    msg.manifest.push_back(std::move(label));
  }
  const auto& rows = j.at("rows");
  msg.payload = FieldMatrix(static_cast<int>(rows.size()), msg.subfile_len, msg.prime);
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (static_cast<int>(row.size()) != msg.subfile_len)
      throw std::invalid_argument("message: row length mismatch");
    for (int c = 0; c < msg.subfile_len; ++c)
      msg.payload.at(static_cast<int>(i), c) = row[static_cast<size_t>(c)].get<Symbol>();
  }
  return msg;
}

}  // namespace

std::string cache_map_to_json(const CacheMap& map,
                              const std::vector<std::vector<Symbol>>* files) {
  return map_to_json_obj(map, files).dump();
}

CacheMap cache_map_from_json(const std::string& text,
                             std::vector<std::vector<Symbol>>* files_out) {
  return map_from_json_obj(json::parse(text), files_out);
}

std::string delivery_message_to_json(const DeliveryMessage& msg) {
  return message_to_json_obj(msg).dump();
}

DeliveryMessage delivery_message_from_json(const std::string& text) {
  return message_from_json_obj(json::parse(text));
}

std::string joint_placement_to_json(const JointPlacement& placement,
                                    const std::vector<std::vector<Symbol>>* files) {
  json plan{{"regime", placement.plan.regime}};
  plan["points"] = placement.plan.points;
  plan["weights"] = json::array();
  for (const auto& w : placement.plan.weights) plan["weights"].push_back(w.str());
  plan["boundaries"] = json::array();
  for (const auto& b : placement.plan.boundaries) plan["boundaries"].push_back(b.str());

  json j{{"schema_version", 1},
         {"kind", "joint-placement"},
         {"K", placement.K},
         {"t", json::array({placement.t1.str(), placement.t2.str()})},
         {"file_len", placement.file_len},
         {"subfile_len", placement.base_subfile_len},
         {"prime", placement.prime},
         {"matrix_seed", placement.matrix_seed},
         {"plan", std::move(plan)}};
  j["segments"] = json::array();
  for (const auto& seg : placement.segments) {
    j["segments"].push_back(json{{"profile", seg.profile},
                                 {"offset", seg.offset},
                                 {"length", seg.length},
                                 {"placement", map_to_json_obj(seg.map, nullptr)}});
  }
  if (files) j["files"] = *files;
  return j.dump();
}

JointPlacement joint_placement_from_json(const std::string& text,
                                         std::vector<std::vector<Symbol>>* files_out) {
  json j = json::parse(text);
  if (j.at("kind") != "joint-placement")
    throw std::invalid_argument("expected a joint-placement document");
  JointPlacement placement;
  placement.K = j.at("K").get<int>();
  placement.t1 = Rational::parse(j.at("t")[0].get<std::string>());
  placement.t2 = Rational::parse(j.at("t")[1].get<std::string>());
  placement.file_len = j.at("file_len").get<long long>();
  placement.base_subfile_len = j.at("subfile_len").get<int>();
  placement.prime = j.at("prime").get<std::uint32_t>();
  placement.matrix_seed = j.at("matrix_seed").get<std::uint32_t>();
  const auto& plan = j.at("plan");
  placement.plan.regime = plan.at("regime").get<int>();
  placement.plan.points = plan.at("points").get<std::vector<std::array<int, 2>>>();
  for (const auto& w : plan.at("weights"))
    placement.plan.weights.push_back(Rational::parse(w.get<std::string>()));
  for (const auto& b : plan.at("boundaries"))
    placement.plan.boundaries.push_back(Rational::parse(b.get<std::string>()));
  for (const auto& s : j.at("segments")) {
    SegmentPlacement seg;
    seg.profile = s.at("profile").get<std::array<int, 2>>();
    seg.offset = s.at("offset").get<long long>();
    seg.length = s.at("length").get<long long>();
    seg.map = map_from_json_obj(s.at("placement"), nullptr);
    placement.segments.push_back(std::move(seg));
  }
  if (files_out && j.contains("files"))
    *files_out = j.at("files").get<std::vector<std::vector<Symbol>>>();
  return placement;
}

std::string joint_messages_to_json(const std::vector<DeliveryMessage>& messages) {
  json j = json::array();
  for (const auto& msg : messages) j.push_back(message_to_json_obj(msg));
  return j.dump();
}

std::vector<DeliveryMessage> joint_messages_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_array()) throw std::invalid_argument("expected a joint-message array");
  std::vector<DeliveryMessage> messages;
  for (const auto& m : j) messages.push_back(message_from_json_obj(m));
  return messages;
}

std::string json_kind(const std::string& text) {
  json j = json::parse(text);
  if (j.is_array()) return "joint-message";
  return j.at("kind").get<std::string>();
}

}  // namespace nucache
