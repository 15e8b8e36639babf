#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "disclose/montecarlo.hpp"
#include "disclose/verify.hpp"
#include "disclose/welfare.hpp"

namespace disclose {

using json = nlohmann::json;

// Parse errors throw DomainError with the offending field named.
Prior prior_from_json(const json& j);
json to_json(const Prior& p);

CostDistribution cost_from_json(const json& j);
json to_json(const CostDistribution& K);

PosteriorDistribution posterior_from_json(const json& j, const Prior& prior, int n);
json to_json(const PosteriorDistribution& G);

// Lossless: doubles are written in shortest round-trip form.
json to_json(const Equilibrium& eq);
Equilibrium equilibrium_from_json(const json& j);

json to_json(const LimitEquilibrium& lim);
json to_json(const CertificateReport& c);
json to_json(const OracleGap& g);
json to_json(const HeteroReport& h);
json to_json(const SimReport& r);
json to_json(const ZScore& z);
json to_json(const SurplusReport& s);
json to_json(const SearchStats& s);

// FNV-1a over the canonical (sorted-key, compact) dump.
std::uint64_t config_hash(const json& config);
std::string hex64(std::uint64_t v);
const char* tool_version();

} // namespace disclose
