#pragma once

#include <string>
#include <vector>

#include "nucache/delivery.hpp"
#include "nucache/placement.hpp"
#include "nucache/scheme.hpp"

namespace nucache {

/// JSON wire formats. Every document carries schema_version and a kind tag;
/// chains serialize as arrays of sorted user arrays, payload symbols as
/// base-10 numbers, exact fractions as "num/den" strings.

std::string cache_map_to_json(const CacheMap& map,
                              const std::vector<std::vector<Symbol>>* files = nullptr);
CacheMap cache_map_from_json(const std::string& text,
                             std::vector<std::vector<Symbol>>* files_out = nullptr);

std::string delivery_message_to_json(const DeliveryMessage& msg);
DeliveryMessage delivery_message_from_json(const std::string& text);

std::string joint_placement_to_json(const JointPlacement& placement,
                                    const std::vector<std::vector<Symbol>>* files = nullptr);
JointPlacement joint_placement_from_json(const std::string& text,
                                         std::vector<std::vector<Symbol>>* files_out = nullptr);

/// A joint broadcast is a JSON array of per-segment message objects.
std::string joint_messages_to_json(const std::vector<DeliveryMessage>& messages);
std::vector<DeliveryMessage> joint_messages_from_json(const std::string& text);

/// Peeks at a serialized document: "placement", "joint-placement",
/// "message" or "joint-message".
std::string json_kind(const std::string& text);

}  // namespace nucache
