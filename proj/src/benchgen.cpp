#include "mulmatch/benchgen.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <deque>
#include <optional>
#include <string>

#include "mulmatch/errors.hpp"

namespace mulmatch {

namespace {

struct PlacedProduct {
  int offset = 0;  // 1-based block offset; occupies blocks offset, offset+1
  TermId term;
};

// blocks: least-significant first, nullopt = zero; resolved from a pattern
std::vector<std::optional<TermId>> resolve_blocks(
    TermStore& s, const std::vector<BlockPattern>& pattern, int base,
    uint32_t w, const char* stem, int& fresh_count,
    std::vector<std::optional<TermId>>& global, Script& script,
    std::optional<TermId>& first_fresh) {
  std::vector<std::optional<TermId>> out;
  for (size_t i = 0; i < pattern.size(); ++i) {
    const BlockPattern& p = pattern[i];
    int self = base + static_cast<int>(i) + 1;
    std::optional<TermId> block;
    switch (p.tag) {
      case BlockTag::Fresh: {
        std::string name = stem + std::to_string(++fresh_count);
        block = s.var(name, w);
        script.declarations.push_back({name, w, false});
        if (!first_fresh) first_fresh = block;
        break;
      }
      case BlockTag::Zero:
        break;
      case BlockTag::Alias:
        if (p.alias_of < 1 || p.alias_of >= self)
          throw InvalidSpec("alias for block " + std::to_string(self) +
                            " must name an earlier block");
        block = global[p.alias_of - 1];
        break;
    }
    global.push_back(block);
    out.push_back(block);
  }
  return out;
}

TermId chain_term(TermStore& s, std::vector<PlacedProduct> chain,
                  int total_blocks, uint32_t w) {
  std::sort(chain.begin(), chain.end(),
            [](const PlacedProduct& a, const PlacedProduct& b) {
              return a.offset > b.offset;
            });
  std::optional<TermId> acc;
  auto append = [&](TermId seg) { acc = acc ? s.concat(*acc, seg) : seg; };
  int top = total_blocks;  // highest unfilled block, most-significant first
  for (const PlacedProduct& p : chain) {
    if (top > p.offset + 1) append(s.zero((top - p.offset - 1) * w));
    append(p.term);
    top = p.offset - 1;
  }
  if (top > 0) append(s.zero(top * w));
  return *acc;
}

}  // namespace

Script gen_long(TermStore& s, const LongSpec& spec) {
  int k = spec.blocks;
  uint32_t w = spec.block_width;
  if (k < 2) throw InvalidSpec("need at least 2 blocks per operand");
  if (w < 1) throw InvalidSpec("block width must be positive");
  auto pattern = [&](const std::vector<BlockPattern>& p,
                     const char* side) -> std::vector<BlockPattern> {
    if (p.empty()) return std::vector<BlockPattern>(k);
    if (p.size() != static_cast<size_t>(k))
      throw InvalidSpec(std::string(side) + " pattern must have one entry per block");
    return p;
  };
  std::vector<BlockPattern> xp = pattern(spec.x_pattern, "x");
  std::vector<BlockPattern> yp = pattern(spec.y_pattern, "y");

  Script script;
  script.logic = "QF_BV";
  script.has_check_sat = true;
  script.has_exit = true;

  std::vector<std::optional<TermId>> global;
  std::optional<TermId> first_fresh;
  int vx = 0, vy = 0;
  std::vector<std::optional<TermId>> x =
      resolve_blocks(s, xp, 0, w, "v", vx, global, script, first_fresh);
  std::vector<std::optional<TermId>> y =
      resolve_blocks(s, yp, k, w, "u", vy, global, script, first_fresh);
  auto any = [](const std::vector<std::optional<TermId>>& v) {
    for (const auto& b : v)
      if (b) return true;
    return false;
  };
  if (!any(x) || !any(y))
    throw InvalidSpec("each operand needs at least one non-zero block");

  std::vector<PlacedProduct> pps;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      if (!x[i - 1] || !y[j - 1]) continue;
      TermId prod = s.bv_mul(zero_ext(s, *x[i - 1], 2 * w),
                             zero_ext(s, *y[j - 1], 2 * w));
      pps.push_back({i + j - 1, prod});
    }

  SplitMix64 rng(spec.seed);
  for (size_t i = pps.size(); i-- > 1;)
    std::swap(pps[i], pps[rng.next() % (i + 1)]);

  // first fit into chains; a product occupies two adjacent blocks, so two
  // products in one chain need offsets at least 2 apart
  std::vector<std::vector<PlacedProduct>> chains;
  for (const PlacedProduct& p : pps) {
    bool placed = false;
    for (auto& chain : chains) {
      bool fits = true;
      for (const PlacedProduct& q : chain)
        if (std::abs(p.offset - q.offset) <= 1) {
          fits = false;
          break;
        }
      if (fits) {
        chain.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) chains.push_back({p});
  }

  std::optional<TermId> sum;
  for (auto& chain : chains) {
    TermId t = chain_term(s, std::move(chain), 2 * k, w);
    sum = sum ? s.bv_add(*sum, t) : t;
  }

  auto materialize = [&](const std::vector<std::optional<TermId>>& v) {
    std::vector<TermId> out;
    for (const auto& b : v) out.push_back(b ? *b : s.zero(w));
    return out;
  };
  TermId xt = assemble_blocks(s, materialize(x), w);
  TermId yt = assemble_blocks(s, materialize(y), w);
  uint32_t wide = 2 * static_cast<uint32_t>(k) * w;
  TermId product =
      s.bv_mul(zero_ext(s, xt, wide), zero_ext(s, yt, wide));
  TermId equality = s.eq(*sum, product);

  if (spec.satisfiable) {
    script.assertions.push_back(equality);
    script.assertions.push_back(
        s.eq(*first_fresh, s.constant(rng.next_bits(w))));
  } else {
    script.assertions.push_back(s.bool_not(equality));
  }
  return script;
}

Script gen_wallace(TermStore& s, const WallaceSpec& spec) {
  uint32_t n = spec.width;
  if (n < 2) throw InvalidSpec("operand width must be at least 2");
  if (n > 1024) throw InvalidSpec("operand width too large");

  Script script;
  script.logic = "QF_BV";
  script.has_check_sat = true;
  script.has_exit = true;
  script.declarations.push_back({"x", n, false});
  script.declarations.push_back({"y", n, false});
  TermId x = s.var("x", n);
  TermId y = s.var("y", n);

  // queues[c]: width-1 terms still to be summed into output bit c
  std::vector<std::deque<TermId>> queues(2 * n + 2);
  for (uint32_t i = 1; i <= n; ++i)
    for (uint32_t j = 1; j <= n; ++j)
      queues[i + j - 1].push_back(
          s.bv_and(s.extract(i - 1, i - 1, x), s.extract(j - 1, j - 1, y)));

  std::vector<TermId> bits(2 * n + 1);
  for (uint32_t c = 1; c <= 2 * n; ++c) {
    auto& q = queues[c];
    while (q.size() >= 3) {
      TermId a = q.front(); q.pop_front();
      TermId b = q.front(); q.pop_front();
      TermId d = q.front(); q.pop_front();
      q.push_back(s.bv_xor(s.bv_xor(a, b), d));
      queues[c + 1].push_back(s.bv_or(
          s.bv_or(s.bv_and(a, b), s.bv_and(b, d)), s.bv_and(d, a)));
    }
    if (q.size() == 2) {
      TermId a = q.front(); q.pop_front();
      TermId b = q.front(); q.pop_front();
      q.push_back(s.bv_xor(a, b));
      queues[c + 1].push_back(s.bv_and(a, b));
    }
    bits[c] = q.empty() ? s.zero(1) : q.front();
  }
  assert(queues[2 * n + 1].empty());

  TermId t = bits[2 * n];
  for (uint32_t c = 2 * n - 1; c >= 1; --c) t = s.concat(t, bits[c]);
  TermId product =
      s.bv_mul(zero_ext(s, x, 2 * n), zero_ext(s, y, 2 * n));
  TermId equality = s.eq(t, product);
  script.assertions.push_back(spec.satisfiable ? equality
                                               : s.bool_not(equality));
  return script;
}

}  // namespace mulmatch
