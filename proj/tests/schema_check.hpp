#pragma once

// Minimal JSON-schema checker for the subset used by the shipped schemas:
// type, properties, required, items (schema or tuple), enum, pattern,
// minimum, $ref (#/definitions/...), oneOf. Test-only.

#include <json.hpp>

#include <regex>
#include <string>

namespace schema_check {

using json = nlohmann::ordered_json;

inline const json& resolve_ref(const json& root, const std::string& ref) {
  const std::string prefix = "#/definitions/";
  if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref: " + ref);
  return root.at("definitions").at(ref.substr(prefix.size()));
}

inline bool validate(const json& root, const json& schema, const json& doc,
                     std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (schema.contains("$ref"))
    return validate(root, resolve_ref(root, schema.at("$ref").get<std::string>()), doc, why);
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& sub : schema.at("oneOf"))
      if (validate(root, sub, doc)) ++hits;
    if (hits != 1) return fail("oneOf matched " + std::to_string(hits) + " branches");
    return true;
  }
  if (schema.contains("enum")) {
    for (const auto& v : schema.at("enum"))
      if (v == doc) return true;
    return fail("value not in enum");
  }
  if (schema.contains("type")) {
    const std::string t = schema.at("type").get<std::string>();
    if (t == "object" && !doc.is_object()) return fail("expected object");
    if (t == "array" && !doc.is_array()) return fail("expected array");
    if (t == "string" && !doc.is_string()) return fail("expected string");
    if (t == "integer" && !doc.is_number_integer()) return fail("expected integer");
    if (t == "number" && !doc.is_number()) return fail("expected number");
    if (t == "boolean" && !doc.is_boolean()) return fail("expected boolean");
  }
  if (schema.contains("pattern") && doc.is_string()) {
    std::regex re(schema.at("pattern").get<std::string>());
    if (!std::regex_search(doc.get<std::string>(), re)) return fail("pattern mismatch");
  }
  if (schema.contains("minimum") && doc.is_number_integer()) {
    if (doc.get<long long>() < schema.at("minimum").get<long long>())
      return fail("below minimum");
  }
  if (schema.contains("required") && doc.is_object()) {
    for (const auto& key : schema.at("required"))
      if (!doc.contains(key.get<std::string>()))
        return fail("missing required key " + key.get<std::string>());
  }
  if (schema.contains("properties") && doc.is_object()) {
    for (const auto& [key, sub] : schema.at("properties").items())
      if (doc.contains(key) && !validate(root, sub, doc.at(key), why)) return false;
  }
  if (schema.contains("items") && doc.is_array()) {
    const json& items = schema.at("items");
    if (items.is_array()) {  // tuple form
      for (std::size_t i = 0; i < doc.size() && i < items.size(); ++i)
        if (!validate(root, items.at(i), doc.at(i), why)) return false;
    } else {
      for (const auto& el : doc)
        if (!validate(root, items, el, why)) return false;
    }
  }
  return true;
}

}  // namespace schema_check
