#include "electroar/transport.hpp"

#include <algorithm>

#include "electroar/error.hpp"

namespace electroar {

void LinkModel::validate() const {
  if (!(loss_probability >= 0.0 && loss_probability < 1.0))
    fail(ErrorCode::InvalidArgument, "loss probability must lie in [0, 1)");
  if (!(reorder_probability >= 0.0 && reorder_probability < 1.0))
    fail(ErrorCode::InvalidArgument, "reorder probability must lie in [0, 1)");
}

SimulatedLink::SimulatedLink(const LinkModel& model) : model_(model), rng_(model.rng_seed) {
  model_.validate();
}

void SimulatedLink::send(std::vector<std::uint8_t> bytes, std::uint64_t tick) {
  ++stats_.sent;
  const bool lost = uniform() < model_.loss_probability;
  std::int64_t jitter = 0;
  if (model_.jitter_ticks > 0) {
    const auto span = 2 * model_.jitter_ticks + 1;
    jitter = static_cast<std::int64_t>(rng_() % span) - static_cast<std::int64_t>(model_.jitter_ticks);
  }
  const bool swap = model_.reorder_probability > 0.0 && uniform() < model_.reorder_probability;
  if (lost) {
    ++stats_.dropped;
    return;
  }

  const std::int64_t delay = std::max<std::int64_t>(0, static_cast<std::int64_t>(model_.latency_ticks) + jitter);
  Pending p{{std::move(bytes), tick, tick + static_cast<std::uint64_t>(delay)}, next_order_++};
  if (swap && !pending_.empty()) {
    std::swap(p.delivery.delivery_tick, pending_.back().delivery.delivery_tick);
    // never deliver before the send tick
    p.delivery.delivery_tick = std::max(p.delivery.delivery_tick, tick);
    ++stats_.swapped;
  }
  pending_.push_back(std::move(p));
}

std::vector<Delivery> SimulatedLink::take_due(std::uint64_t tick, bool all) {
  std::vector<Pending> due;
  std::vector<Pending> keep;
  for (auto& p : pending_) (all || p.delivery.delivery_tick <= tick ? due : keep).push_back(std::move(p));
  pending_ = std::move(keep);
  std::sort(due.begin(), due.end(), [](const Pending& l, const Pending& r) {
    return l.delivery.delivery_tick != r.delivery.delivery_tick
               ? l.delivery.delivery_tick < r.delivery.delivery_tick
               : l.order < r.order;
  });
  std::vector<Delivery> out;
  out.reserve(due.size());
  for (auto& p : due) out.push_back(std::move(p.delivery));
  stats_.delivered += out.size();
  return out;
}

std::vector<Delivery> SimulatedLink::advance(std::uint64_t tick) { return take_due(tick, false); }

std::vector<Delivery> SimulatedLink::drain() { return take_due(0, true); }

std::vector<Delivery> link_transmit(std::span<const Transmission> frames, const LinkModel& model) {
  SimulatedLink link(model);
  for (const auto& f : frames) link.send(f.bytes, f.tick);
  return link.drain();
}

}  // namespace electroar
