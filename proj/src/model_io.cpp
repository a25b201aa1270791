#include "pfl/model_io.hpp"

#include <sstream>

namespace pfl {

nlohmann::json to_json(const Model& m) {
  nlohmann::json j;
  j["worlds"] = m.worlds();
  auto pairs = [](const Relation& r) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto [a, b] : r.pairs()) arr.push_back({a, b});
    return arr;
  };
  j["rel_p"] = pairs(m.frame.rel_p);
  j["rel_f"] = pairs(m.frame.rel_f);
  nlohmann::json val = nlohmann::json::object();
  for (std::size_t w = 0; w < m.worlds(); ++w)
    if (!m.valuation[w].empty()) val[std::to_string(w)] = m.valuation[w];
  j["valuation"] = val;
  return j;
}

Model model_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("worlds")) throw std::invalid_argument("model needs \"worlds\"");
    auto n = j.at("worlds").get<std::size_t>();
    Model m{Frame(n)};
    auto load = [&](const char* key, Relation& rel) {
      if (!j.contains(key)) return;
      for (const auto& e : j.at(key)) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument(std::string(key) + " entries are pairs");
        auto a = e[0].get<std::size_t>(), b = e[1].get<std::size_t>();
        if (a >= n || b >= n) throw std::invalid_argument(std::string(key) + " mentions an unknown world");
        rel.set(a, b);
      }
    };
    load("rel_p", m.frame.rel_p);
    load("rel_f", m.frame.rel_f);
    if (j.contains("valuation")) {
      for (const auto& [key, names] : j.at("valuation").items()) {
        std::size_t pos = 0;
        unsigned long w = std::stoul(key, &pos);
        if (pos != key.size() || w >= n) throw std::invalid_argument("valuation key '" + key + "' is not a world");
        for (const auto& name : names) m.valuation[w].insert(name.get<std::string>());
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed model: ") + e.what());
  } catch (const std::logic_error& e) {
    throw std::invalid_argument(std::string("malformed model: ") + e.what());
  }
}

std::string to_dot(const Model& m, std::optional<std::size_t> designated) {
  std::ostringstream os;
  os << "digraph model {\n";
  for (std::size_t w = 0; w < m.worlds(); ++w) {
    os << "  w" << w << " [label=\"" << w << ":";
    bool first = true;
    for (const auto& v : m.valuation[w]) {
      os << (first ? " " : ",") << v;
      first = false;
    }
    os << "\"";
    if (designated == w) os << ", peripheries=2";
    os << "];\n";
  }
  for (auto [a, b] : m.frame.rel_p.pairs()) os << "  w" << a << " -> w" << b << ";\n";
  for (auto [a, b] : m.frame.rel_f.pairs()) os << "  w" << a << " -> w" << b << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

}  // namespace pfl
