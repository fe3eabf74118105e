#include "lgt/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lgt/errors.hpp"

namespace lgt {

namespace {

using nlohmann::json;

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Line numbers of the top-level keys and of every layer/entry array, found by
/// a lexical scan so that semantic errors can point into the file.
struct Landmarks {
  std::map<std::string, std::size_t> key_line;
  std::vector<std::size_t> layer_line;
  std::vector<std::vector<std::size_t>> entry_line;

  std::size_t key(const std::string& name) const {
    auto it = key_line.find(name);
    return it == key_line.end() ? 0 : it->second;
  }
  std::size_t layer(std::size_t k) const { return k < layer_line.size() ? layer_line[k] : 0; }
  std::size_t entry(std::size_t k, std::size_t i) const {
    if (k < entry_line.size() && i < entry_line[k].size()) return entry_line[k][i];
    return layer(k);
  }
};

Landmarks scan(std::string_view text) {
  Landmarks marks;
  std::size_t line = 1;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  std::string token;
  std::string last_key;
  std::string current_key;
  std::size_t token_line = 0;
  for (char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      } else {
        token += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        token.clear();
        token_line = line;
        break;
      case ':':
        if (depth == 1) {
          current_key = token;
          marks.key_line.emplace(token, token_line);
        }
        break;
      case '{':
      case '[':
        ++depth;
        if (c == '[' && current_key == "layers") {
          if (depth == 3) {
            marks.layer_line.push_back(line);
            marks.entry_line.emplace_back();
          } else if (depth == 4 && !marks.entry_line.empty()) {
            marks.entry_line.back().push_back(line);
          }
        }
        break;
      case '}':
      case ']':
        --depth;
        break;
      default:
        break;
    }
  }
  return marks;
}

std::uint64_t read_id(const json& value, const std::string& field, std::size_t line) {
  if (!value.is_number_integer()) throw ParseError(field, line, "expected an integer node id");
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  const auto v = value.get<std::int64_t>();
  if (v < 0) throw ParseError(field, line, "node ids must be non-negative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string to_json(const Instance& instance) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"name\": " << json(instance.name).dump() << ",\n";
  out << "  \"width\": " << instance.width << ",\n";
  out << "  \"seed\": ";
  if (instance.seed) {
    out << *instance.seed;
  } else {
    out << "null";
  }
  out << ",\n  \"layers\": [";
  for (std::size_t k = 0; k < instance.layers.size(); ++k) {
    out << (k == 0 ? "\n    [" : ",\n    [");
    const auto& entries = instance.layers[k].entries;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i != 0) out << ", ";
      out << '[' << raw(entries[i].child) << ", " << raw(entries[i].parent) << ']';
    }
    out << ']';
  }
  out << (instance.layers.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

Instance from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", line_at(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  const Landmarks marks = scan(text);

  if (!doc.is_object()) throw ParseError("", 1, "expected a JSON object");
  for (const char* key : {"name", "width", "seed", "layers"}) {
    if (!doc.contains(key)) throw ParseError(key, 0, "missing field");
  }

  Instance instance;
  if (!doc["name"].is_string()) throw ParseError("name", marks.key("name"), "expected a string");
  instance.name = doc["name"].get<std::string>();

  const json& width = doc["width"];
  if (!width.is_number_integer() || width.get<std::int64_t>() < 1) {
    throw ParseError("width", marks.key("width"), "expected a positive integer");
  }
  instance.width = width.get<std::size_t>();

  const json& seed = doc["seed"];
  if (!seed.is_null()) instance.seed = read_id(seed, "seed", marks.key("seed"));

  const json& layers = doc["layers"];
  if (!layers.is_array() || layers.empty()) {
    throw ParseError("layers", marks.key("layers"), "expected a non-empty array of layers");
  }

  LayeredTree tree;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string field = "layers[" + std::to_string(k) + "]";
    const json& layer = layers[k];
    if (!layer.is_array() || layer.empty()) {
      throw ParseError(field, marks.layer(k), "expected a non-empty array of [child, parent] pairs");
    }
    LayerUpdate update;
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const std::string entry_field = field + "[" + std::to_string(i) + "]";
      const std::size_t line = marks.entry(k, i);
      const json& pair = layer[i];
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError(entry_field, line, "expected [child, parent]");
      }
      update.entries.push_back({NodeId{read_id(pair[0], entry_field, line)},
                                NodeId{read_id(pair[1], entry_field, line)}});
    }
    try {
      tree.apply_layer(update);
    } catch (const MalformedInput& e) {
      throw ParseError(field, marks.layer(k), e.what());
    } catch (const TraversalTerminated& e) {
      throw ParseError(field, marks.layer(k), e.what());
    }
    instance.layers.push_back(std::move(update));
  }
  if (tree.max_layer_size() != instance.width) {
    throw ParseError("width", marks.key("width"),
                     "declared " + std::to_string(instance.width) + " but the widest layer has " +
                         std::to_string(tree.max_layer_size()) + " nodes");
  }
  return instance;
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_json(instance);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

}  // namespace lgt
