#include "conclab/classical_routing.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace conclab {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

struct TailEntry {
  int section = 0;
  int local = 0;
  int input = 0;
};

}  // namespace

std::vector<int> prefix_sum(const std::vector<int>& bits) {
  std::vector<int> out(bits.size());
  int running = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    running += bits[i];
    out[i] = running;
  }
  return out;
}

ReindexPlan compute_reindex_plan(const std::vector<int>& section_sizes, int m,
                                 int p) {
  require(p >= 1, "section count must be positive");
  require(m >= p && m % p == 0, "p must divide m");
  require(static_cast<int>(section_sizes.size()) == p,
          "one size per section expected");
  const int g = m / p;

  ReindexPlan plan;
  plan.a.resize(static_cast<size_t>(p));
  std::vector<int> not_a(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    plan.a[static_cast<size_t>(j)] = section_sizes[static_cast<size_t>(j)] > g ? 1 : 0;
    not_a[static_cast<size_t>(j)] = 1 - plan.a[static_cast<size_t>(j)];
  }
  plan.r = prefix_sum(plan.a);
  plan.s = prefix_sum(not_a);
  const int rp = plan.r[static_cast<size_t>(p) - 1];
  plan.d.resize(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    plan.d[static_cast<size_t>(j)] =
        plan.a[static_cast<size_t>(j)]
            ? plan.r[static_cast<size_t>(j)]
            : plan.s[static_cast<size_t>(j)] + rp;
  }

  std::vector<int> check = plan.d;
  std::sort(check.begin(), check.end());
  for (int j = 0; j < p; ++j)
    if (check[static_cast<size_t>(j)] != j + 1)
      throw std::logic_error("reindex plan is not a permutation");
  return plan;
}

std::deque<int> route_full_slim(const Concentrator& conc, const Request& req,
                                Assignment& asg, StepLedger& ledger) {
  const int n = conc.inputs();
  const int m = conc.outputs();
  const int base = n - m;
  std::deque<int> idle;
  for (int i = 1; i <= m; ++i) {
    ++ledger.array_reads;
    if (req.is_active(base + i)) {
      asg.pairs.emplace_back(base + i, i);
      ++ledger.pairings;
    } else {
      idle.push_back(i);
      ++ledger.list_ops;
    }
  }
  return idle;
}

RouteResult route_full_classical(const Concentrator& conc, const Request& req) {
  require(conc.kind() == TopologyKind::FullFatSlim,
          "route_full_classical needs a full fat-and-slim concentrator");
  require(req.size() == conc.inputs(),
          "request length does not match input count");
  require(req.active_count() == conc.outputs(),
          "full routing requires a completed request (k = m)");

  RouteResult res;
  std::deque<int> idle = route_full_slim(conc, req, res.assignment, res.ledger);
  const int fat = conc.inputs() - conc.outputs();
  for (int i = 1; i <= fat; ++i) {
    ++res.ledger.array_reads;
    if (req.is_active(i)) {
      const int z = idle.front();
      idle.pop_front();
      ++res.ledger.list_ops;
      res.assignment.pairs.emplace_back(i, z);
      ++res.ledger.pairings;
    }
  }
  return res;
}

void pair_bounded_fat(const Concentrator& conc,
                      const std::vector<int>& fat_locals,
                      std::vector<std::uint8_t>& output_idle, Assignment& asg,
                      StepLedger& ledger, std::vector<int>& unrouted) {
  const int q = conc.fat_width();
  const int c = conc.capacity();
  const int base = conc.inputs() - q;
  for (int i : fat_locals) {
    ++ledger.list_ops;
    bool placed = false;
    for (int j = 0; j < c; ++j) {
      const int z = i + q * j;
      ++ledger.array_reads;
      if (output_idle[static_cast<size_t>(z)]) {
        asg.pairs.emplace_back(base + i, z);
        ++ledger.pairings;
        placed = true;
        break;
      }
    }
    if (!placed) unrouted.push_back(base + i);
  }
}

RouteResult route_bounded_classical(const Concentrator& conc,
                                    const Request& req) {
  require(conc.kind() == TopologyKind::BoundedFatSlim,
          "route_bounded_classical needs a bounded fat-and-slim concentrator");
  require(req.size() == conc.inputs(),
          "request length does not match input count");

  const int n = conc.inputs();
  const int m = conc.outputs();
  const int q = conc.fat_width();

  RouteResult res;
  StepLedger& led = res.ledger;
  std::vector<std::uint8_t> output_idle(static_cast<size_t>(m) + 1, 1);
  led.array_writes += m;

  for (int i = 1; i <= n - q; ++i) {
    ++led.array_reads;
    if (req.is_active(i)) {
      res.assignment.pairs.emplace_back(i, i);
      ++led.pairings;
      output_idle[static_cast<size_t>(i)] = 0;
      ++led.array_writes;
    }
  }

  std::vector<int> fat;
  for (int i = 1; i <= q; ++i) {
    ++led.array_reads;
    if (req.is_active(n - q + i)) {
      fat.push_back(i);
      ++led.list_ops;
    }
  }
  pair_bounded_fat(conc, fat, output_idle, res.assignment, led, res.unrouted);
  return res;
}

RegularRouteResult route_regular_sections(
    const Concentrator& conc, std::vector<std::vector<int>> section_actives,
    StepLedger ledger) {
  require(conc.kind() == TopologyKind::RegularFatSlim,
          "regular routing needs a regular fat-and-slim concentrator");
  const int p = conc.sections();
  const int m = conc.outputs();
  const int g = conc.section_width();
  require(static_cast<int>(section_actives.size()) == p,
          "one active list per section expected");
  int total = 0;
  for (const auto& list : section_actives) total += static_cast<int>(list.size());
  require(total == m, "regular routing requires exactly m active inputs");

  RegularRouteResult res;
  res.ledger = ledger;
  StepLedger& led = res.ledger;
  auto& R = section_actives;

  std::vector<std::uint8_t> out_used(static_cast<size_t>(m) + 1, 0);
  auto emit = [&](int section, int local, int output) {
    res.assignment.pairs.emplace_back(conc.input_id(section, local), output);
    ++led.pairings;
    out_used[static_cast<size_t>(output)] = 1;
  };

  int special = 0;
  int over = 0;
  for (int j = 1; j <= p; ++j) {
    ++led.array_reads;
    if (static_cast<int>(R[static_cast<size_t>(j) - 1].size()) > m - g) {
      if (special == 0) special = j;
      ++over;
    }
  }
  if (over > 1)
    throw std::logic_error("more than one section exceeds m - m/p actives");

  if (special != 0) {
    res.detail.case_a = true;
    res.detail.case_a_section = special;
    const auto& sp_list = R[static_cast<size_t>(special) - 1];
    std::vector<std::vector<std::uint8_t>> done(static_cast<size_t>(p));
    for (int j = 0; j < p; ++j)
      done[static_cast<size_t>(j)].assign(R[static_cast<size_t>(j)].size(), 0);

    const OutputRange u_sp = conc.u_range(special);
    for (size_t idx = 0; idx < sp_list.size(); ++idx) {
      ++led.array_reads;
      const int t = sp_list[idx];
      if (u_sp.contains(t)) {
        emit(special, t, t);
        done[static_cast<size_t>(special) - 1][idx] = 1;
      }
    }

    int cursor = u_sp.first;
    auto advance = [&] {
      while (cursor <= u_sp.last && out_used[static_cast<size_t>(cursor)])
        ++cursor;
    };
    advance();
    for (int j = 1; j <= p && cursor <= u_sp.last; ++j) {
      if (j == special) continue;
      const auto& list = R[static_cast<size_t>(j) - 1];
      for (size_t idx = 0; idx < list.size() && cursor <= u_sp.last; ++idx) {
        emit(j, list[idx], cursor);
        done[static_cast<size_t>(j) - 1][idx] = 1;
        ++led.list_ops;
        advance();
      }
    }

    const int prev = special == 1 ? p : special - 1;
    const int next = special == p ? 1 : special + 1;
    {
      const OutputRange u_next = conc.u_range(next);
      int out_cur = u_next.first;
      const auto& list = R[static_cast<size_t>(prev) - 1];
      for (size_t idx = 0; idx < list.size(); ++idx) {
        if (done[static_cast<size_t>(prev) - 1][idx]) continue;
        while (out_cur <= u_next.last && out_used[static_cast<size_t>(out_cur)])
          ++out_cur;
        if (out_cur > u_next.last)
          throw std::logic_error("regular case (a): next block exhausted");
        emit(prev, list[idx], out_cur);
        done[static_cast<size_t>(prev) - 1][idx] = 1;
        ++led.list_ops;
      }
    }
    {
      const OutputRange u_prev = conc.u_range(prev);
      int out_cur = u_prev.first;
      for (int j = 1; j <= p; ++j) {
        if (j == special || j == prev) continue;
        const auto& list = R[static_cast<size_t>(j) - 1];
        for (size_t idx = 0; idx < list.size(); ++idx) {
          if (done[static_cast<size_t>(j) - 1][idx]) continue;
          while (out_cur <= u_prev.last &&
                 out_used[static_cast<size_t>(out_cur)])
            ++out_cur;
          if (out_cur > u_prev.last)
            throw std::logic_error("regular case (a): prev block exhausted");
          emit(j, list[idx], out_cur);
          done[static_cast<size_t>(j) - 1][idx] = 1;
          ++led.list_ops;
        }
      }
    }
    {
      int out_cur = 1;
      auto skip = [&] {
        while (out_cur <= m && (u_sp.contains(out_cur) ||
                                out_used[static_cast<size_t>(out_cur)]))
          ++out_cur;
      };
      skip();
      for (size_t idx = 0; idx < sp_list.size(); ++idx) {
        if (done[static_cast<size_t>(special) - 1][idx]) continue;
        if (out_cur > m)
          throw std::logic_error("regular case (a): no idle output left");
        emit(special, sp_list[idx], out_cur);
        skip();
      }
    }
    return res;
  }

  // Case (b): every section holds at most m - m/p actives. Reindex, peel
  // the first m/p actives of each heavy section into the previous block,
  // then pair the concatenated tail against the remaining blocks.
  std::vector<int> sizes(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j)
    sizes[static_cast<size_t>(j)] =
        static_cast<int>(R[static_cast<size_t>(j)].size());
  led.array_reads += p;
  ReindexPlan plan = compute_reindex_plan(sizes, m, p);
  led.array_writes += 4 * p;
  const int rp = plan.r[static_cast<size_t>(p) - 1];

  std::vector<int> section_at(static_cast<size_t>(p) + 1, 0);
  for (int j = 1; j <= p; ++j) {
    section_at[static_cast<size_t>(plan.d[static_cast<size_t>(j) - 1])] = j;
    ++led.list_ops;
  }
  res.detail.plan = plan;

  auto list_at = [&](int dj) -> std::vector<int>& {
    return R[static_cast<size_t>(section_at[static_cast<size_t>(dj)]) - 1];
  };

  std::vector<std::vector<TailEntry>> peeled_rest(static_cast<size_t>(rp) + 1);
  for (int dj = 2; dj <= rp; ++dj) {
    auto& list = list_at(dj);
    const int sec = section_at[static_cast<size_t>(dj)];
    const OutputRange target = conc.u_range(section_at[static_cast<size_t>(dj) - 1]);
    int out_cur = target.first;
    for (int t = 0; t < g; ++t) {
      emit(sec, list[static_cast<size_t>(t)], out_cur++);
      ++led.list_ops;
    }
    auto& rest = peeled_rest[static_cast<size_t>(dj)];
    for (size_t t = static_cast<size_t>(g); t < list.size(); ++t)
      rest.push_back({sec, list[t], conc.input_id(sec, list[t])});
  }

  std::vector<TailEntry> entries;
  entries.reserve(static_cast<size_t>(m));
  auto append_whole = [&](int dj) {
    const int sec = section_at[static_cast<size_t>(dj)];
    for (int local : list_at(dj))
      entries.push_back({sec, local, conc.input_id(sec, local)});
  };
  for (int dj = rp + 1; dj <= p; ++dj) append_whole(dj);
  if (rp >= 1) append_whole(1);
  for (int dj = 2; dj <= rp; ++dj)
    entries.insert(entries.end(), peeled_rest[static_cast<size_t>(dj)].begin(),
                   peeled_rest[static_cast<size_t>(dj)].end());

  std::vector<int> tail_outputs;
  for (int dj = std::max(rp, 1); dj <= p; ++dj) {
    const OutputRange range = conc.u_range(section_at[static_cast<size_t>(dj)]);
    for (int o = range.first; o <= range.last; ++o) tail_outputs.push_back(o);
  }
  if (entries.size() != tail_outputs.size())
    throw std::logic_error("regular case (b): tail sizes disagree");

  // Sequential pairing in the listed order. An incompatible head output is
  // swapped with the next compatible one; if nothing ahead fits, an
  // alternating-path repair reassigns earlier tail pairs. A perfect tail
  // matching always exists, so the repair cannot fail.
  std::vector<int> match(tail_outputs.size(), -1);
  std::vector<int> order(tail_outputs.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::uint8_t> visited(tail_outputs.size(), 0);
  std::function<bool(int)> place = [&](int e) -> bool {
    for (size_t t = 0; t < tail_outputs.size(); ++t) {
      if (visited[t]) continue;
      ++led.array_reads;
      if (!conc.has_crosspoint(entries[static_cast<size_t>(e)].input,
                               tail_outputs[t]))
        continue;
      visited[t] = 1;
      if (match[t] < 0 || place(match[t])) {
        match[t] = e;
        return true;
      }
    }
    return false;
  };

  for (size_t e = 0; e < entries.size(); ++e) {
    int found = -1;
    for (size_t t = 0; t < order.size(); ++t) {
      ++led.array_reads;
      if (conc.has_crosspoint(entries[e].input,
                              tail_outputs[static_cast<size_t>(order[t])])) {
        found = static_cast<int>(t);
        break;
      }
    }
    if (found >= 0) {
      const int pos = order[static_cast<size_t>(found)];
      if (found > 0) {
        order[static_cast<size_t>(found)] = order[0];
        ++res.detail.guard_swaps;
        ++led.list_ops;
      }
      order.erase(order.begin());
      ++led.list_ops;
      match[static_cast<size_t>(pos)] = static_cast<int>(e);
    } else {
      ++res.detail.guard_augments;
      std::fill(visited.begin(), visited.end(), 0);
      if (!place(static_cast<int>(e)))
        throw std::logic_error("regular case (b): tail repair failed");
      for (size_t t = 0; t < order.size(); ++t) {
        if (match[static_cast<size_t>(order[t])] >= 0) {
          order.erase(order.begin() + static_cast<long>(t));
          ++led.list_ops;
          break;
        }
      }
    }
  }

  std::vector<int> output_of(entries.size(), 0);
  for (size_t t = 0; t < tail_outputs.size(); ++t)
    output_of[static_cast<size_t>(match[t])] = tail_outputs[t];
  for (size_t e = 0; e < entries.size(); ++e)
    emit(entries[e].section, entries[e].local, output_of[e]);

  return res;
}

RegularRouteResult route_regular_classical(const Concentrator& conc,
                                           const Request& req) {
  require(conc.kind() == TopologyKind::RegularFatSlim,
          "route_regular_classical needs a regular fat-and-slim concentrator");
  require(req.size() == conc.inputs(),
          "request length does not match input count");
  require(req.active_count() == conc.outputs(),
          "regular routing requires a completed request (k = m)");

  StepLedger led;
  const int p = conc.sections();
  const int m = conc.outputs();
  std::vector<std::vector<int>> sections(static_cast<size_t>(p));
  for (int j = 1; j <= p; ++j) {
    for (int i = 1; i <= m; ++i) {
      ++led.array_reads;
      if (req.is_active((j - 1) * m + i)) {
        sections[static_cast<size_t>(j) - 1].push_back(i);
        ++led.list_ops;
        ++led.array_writes;
      }
    }
  }
  return route_regular_sections(conc, std::move(sections), led);
}

}  // namespace conclab
