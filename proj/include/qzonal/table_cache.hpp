#pragma once

/**
 * @file table_cache.hpp
 * @brief Process-wide memo of zonal tables keyed by (k, part cap), with
 * optional persistence to JSON files in $QZONAL_TABLE_CACHE_DIR.
 *
 * File layout, one file per key:
 *   {"k": 4, "part_cap": 4,
 *    "rows": [{"kappa": [4], "entries": [{"lambda": [4], "num": "1", "den": "1"}, ...]}, ...]}
 */

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qzonal/zonal.hpp"

namespace qzonal {

inline nlohmann::json table_to_json(const ZonalTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t a = 0; a < t.size(); ++a) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t b = a; b < t.size(); ++b) {
      const BigRational& c = t.coeff(a, b);
      entries.push_back({{"lambda", t.partitions()[b].parts()},
                         {"num", boost::multiprecision::numerator(c).str()},
                         {"den", boost::multiprecision::denominator(c).str()}});
    }
    rows.push_back({{"kappa", t.partitions()[a].parts()}, {"entries", std::move(entries)}});
  }
  return {{"k", t.k()}, {"part_cap", t.part_cap()}, {"rows", std::move(rows)}};
}

/// Parses a cached table. Throws std::invalid_argument if the layout does not
/// match the enumeration for (k, part_cap).
inline ZonalTable table_from_json(const nlohmann::json& j) {
  const int k = j.at("k").get<int>();
  const int cap = j.at("part_cap").get<int>();
  const auto expected = partitions_of(k, std::max(1, std::min(cap, std::max(k, 1))));
  const auto& rows = j.at("rows");
  if (rows.size() != expected.size()) throw std::invalid_argument("table_from_json: row count mismatch");
  std::vector<std::vector<BigRational>> out(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (Partition(rows[a].at("kappa").get<std::vector<int>>()) != expected[a])
      throw std::invalid_argument("table_from_json: unexpected kappa in row " + std::to_string(a));
    const auto& entries = rows[a].at("entries");
    if (entries.size() != expected.size() - a) throw std::invalid_argument("table_from_json: row length mismatch");
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (Partition(entries[e].at("lambda").get<std::vector<int>>()) != expected[a + e])
        throw std::invalid_argument("table_from_json: unexpected lambda");
      BigRational q{BigInt(entries[e].at("num").get<std::string>()), BigInt(entries[e].at("den").get<std::string>())};
      out[a].push_back(std::move(q));
    }
  }
  return ZonalTable::from_rows(k, cap, std::move(out));
}

/// Thread-safe memo. Concurrent requests for the same key wait on a single build.
class TableCache {
 public:
  using Ptr = std::shared_ptr<const ZonalTable>;

  /// Table of degree k restricted to part_cap parts; caps above k collapse to the full table.
  Ptr get(int k, int part_cap) {
    const Key key{k, std::max(1, std::min(part_cap, std::max(k, 1)))};
    std::promise<Ptr> promise;
    std::shared_future<Ptr> fut;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto it = tables_.find(key);
      if (it != tables_.end()) {
        fut = it->second;
      } else {
        fut = promise.get_future().share();
        tables_.emplace(key, fut);
        owner = true;
      }
    }
    if (owner) {
      try {
        promise.set_value(std::make_shared<const ZonalTable>(load_or_build(key.first, key.second)));
      } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard lock(mutex_);
        tables_.erase(key);
      }
    }
    return fut.get();
  }

  /// Table entries converted to Real, flattened row by row.
  template <class Real>
  std::shared_ptr<const std::vector<Real>> coeffs(int k, int part_cap) {
    Ptr t = get(k, part_cap);
    static std::mutex m;
    static std::map<Key, std::shared_ptr<const std::vector<Real>>> memo;
    const Key key{t->k(), t->part_cap()};
    {
      std::lock_guard lock(m);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    auto v = std::make_shared<std::vector<Real>>();
    v->reserve(t->size() * (t->size() + 1) / 2);
    for (std::size_t a = 0; a < t->size(); ++a)
      for (std::size_t b = a; b < t->size(); ++b) v->push_back(from_rational<Real>(t->coeff(a, b)));
    std::lock_guard lock(m);
    return memo.emplace(key, std::move(v)).first->second;
  }

  void clear() {
    std::lock_guard lock(mutex_);
    tables_.clear();
  }

 private:
  using Key = std::pair<int, int>;

  static ZonalTable load_or_build(int k, int cap) {
    const char* dir = std::getenv("QZONAL_TABLE_CACHE_DIR");
    if (!dir || !*dir) return build_table(k, cap);
    namespace fs = std::filesystem;
    const fs::path path = fs::path(dir) / ("zonal_k" + std::to_string(k) + "_cap" + std::to_string(cap) + ".json");
    std::error_code ec;
    if (fs::exists(path, ec)) {
      try {
        std::ifstream in(path);
        return table_from_json(nlohmann::json::parse(in));
      } catch (const std::exception&) {
        // unreadable cache entry: rebuild and overwrite
      }
    }
    ZonalTable t = build_table(k, cap);
    fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << table_to_json(t).dump();
    }
    fs::rename(tmp, path, ec);
    return t;
  }

  std::mutex mutex_;
  std::map<Key, std::shared_future<Ptr>> tables_;
};

/// The shared process-wide cache.
inline TableCache& table_cache() {
  static TableCache cache;
  return cache;
}

}  // namespace qzonal
