#include "ttm/temporal.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace ttm {

namespace {

constexpr std::array<std::string_view, kAllenCount> kRelationNames = {
    "before", "meets",         "overlaps",   "starts",   "during",
    "finishes", "equals",      "after",      "met_by",   "overlapped_by",
    "started_by", "contains",  "finished_by",
};

// Short codes used only to keep the composition table below readable.
constexpr std::array<std::string_view, kAllenCount> kShortCodes = {
    "b", "m", "o", "s", "d", "f", "e", "bi", "mi", "oi", "si", "di", "fi",
};

constexpr PointRelation B = PointRelation::Before;
constexpr PointRelation E = PointRelation::Equals;
constexpr PointRelation A = PointRelation::After;

constexpr std::array<RelationSignature, kAllenCount> kSignatures = {{
    {B, B, B, B},  // before
    {B, B, E, B},  // meets
    {B, B, A, B},  // overlaps
    {E, B, A, B},  // starts
    {A, B, A, B},  // during
    {A, B, A, E},  // finishes
    {E, B, A, E},  // equals
    {A, A, A, A},  // after
    {A, E, A, A},  // met_by
    {A, B, A, A},  // overlapped_by
    {E, B, A, A},  // started_by
    {B, B, A, A},  // contains
    {B, B, A, E},  // finished_by
}};

// Allen's transitivity table. Row r1, column r2, cell = compose(r1, r2).
constexpr const char* kComposition[kAllenCount][kAllenCount] = {
    // clang-format off
    {"b", "b", "b", "b", "b m o s d", "b m o s d", "b", "b m o s d f e bi mi oi si di fi", "b m o s d", "b m o s d", "b", "b", "b"},  // b
    {"b", "b", "b", "m", "o s d", "o s d", "m", "bi mi oi si di", "f e fi", "o s d", "m", "b", "b"},  // m
    {"b", "b", "b m o", "o", "o s d", "o s d", "o", "bi mi oi si di", "oi si di", "o s d f e oi si di fi", "o di fi", "b m o di fi", "b m o"},  // o
    {"b", "b", "b m o", "s", "d", "d", "s", "bi", "mi", "d f oi", "s e si", "b m o di fi", "b m o"},  // s
    {"b", "b", "b m o s d", "d", "d", "d", "d", "bi", "bi", "d f bi mi oi", "d f bi mi oi", "b m o s d f e bi mi oi si di fi", "b m o s d"},  // d
    {"b", "m", "o s d", "d", "d", "f", "f", "bi", "bi", "bi mi oi", "bi mi oi", "bi mi oi si di", "f e fi"},  // f
    {"b", "m", "o", "s", "d", "f", "e", "bi", "mi", "oi", "si", "di", "fi"},  // e
    {"b m o s d f e bi mi oi si di fi", "d f bi mi oi", "d f bi mi oi", "d f bi mi oi", "d f bi mi oi", "bi", "bi", "bi", "bi", "bi", "bi", "bi", "bi"},  // bi
    {"b m o di fi", "s e si", "d f oi", "d f oi", "d f oi", "mi", "mi", "bi", "bi", "bi", "bi", "bi", "mi"},  // mi
    {"b m o di fi", "o di fi", "o s d f e oi si di fi", "d f oi", "d f oi", "oi", "oi", "bi", "bi", "bi mi oi", "bi mi oi", "bi mi oi si di", "oi si di"},  // oi
    {"b m o di fi", "o di fi", "o di fi", "s e si", "d f oi", "oi", "si", "bi", "mi", "oi", "si", "di", "di"},  // si
    {"b m o di fi", "o di fi", "o di fi", "o di fi", "o s d f e oi si di fi", "oi si di", "di", "bi mi oi si di", "oi si di", "oi si di", "di", "di", "di"},  // di
    {"b", "m", "o", "o", "o s d", "f e fi", "fi", "bi mi oi si di", "oi si di", "oi si di", "di", "di", "fi"},  // fi
    // clang-format on
};

RelationSet parse_codes(std::string_view text) {
  RelationSet out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(' ', pos);
    if (next == std::string_view::npos) next = text.size();
    const auto token = text.substr(pos, next - pos);
    for (std::size_t i = 0; i < kAllenCount; ++i) {
      if (kShortCodes[i] == token) out |= RelationSet(static_cast<AllenRelation>(i));
    }
    pos = next + 1;
  }
  return out;
}

using CompositionTable = std::array<std::array<RelationSet, kAllenCount>, kAllenCount>;

const CompositionTable& composition_table() {
  static const CompositionTable table = [] {
    CompositionTable t{};
    for (std::size_t i = 0; i < kAllenCount; ++i) {
      for (std::size_t j = 0; j < kAllenCount; ++j) t[i][j] = parse_codes(kComposition[i][j]);
    }
    return t;
  }();
  return table;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

bool TimeInterval::valid() const { return finite(start) && finite(end) && start < end; }

TimeInterval TimeInterval::checked(TimePoint start, TimePoint end) {
  TimeInterval i{start, end};
  if (!i.valid()) {
    std::ostringstream os;
    os << "interval [" << start << ", " << end << "] must be finite with start < end";
    throw make_error("InvalidInterval", os.str());
  }
  return i;
}

Action Action::parse(std::string_view key) {
  const auto colon = key.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 >= key.size() ||
      key.find(':', colon + 1) != std::string_view::npos) {
    throw make_error("InvalidAction", "expected \"verb:object\", got \"" + std::string(key) + "\"");
  }
  return Action{std::string(key.substr(0, colon)), std::string(key.substr(colon + 1))};
}

std::string_view to_string(Hand hand) { return hand == Hand::Left ? "left" : "right"; }

std::optional<Hand> hand_from_string(std::string_view name) {
  if (name == "left") return Hand::Left;
  if (name == "right") return Hand::Right;
  return std::nullopt;
}

std::string Violation::describe() const {
  std::ostringstream os;
  os << "demonstration '" << demo_id << "', " << to_string(hand) << " hand, index " << index << ": ";
  switch (rule) {
    case Rule::DegenerateInterval: os << "interval start must be strictly before its end"; break;
    case Rule::NonFinite: os << "time points must be finite"; break;
    case Rule::Overlap: os << "observation overlaps or precedes its predecessor"; break;
    case Rule::EmptyAction: os << "verb and object must be non-empty"; break;
    case Rule::DuplicateId: os << "duplicate demonstration id"; break;
  }
  return os.str();
}

std::vector<Violation> validate_demonstration(const Demonstration& demo) {
  std::vector<Violation> out;
  for (Hand hand : {Hand::Left, Hand::Right}) {
    const auto& seq = demo.hand(hand);
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const auto& obs = seq[k];
      auto report = [&](Violation::Rule rule) { out.push_back({demo.id, hand, k, rule}); };
      if (obs.action.verb.empty() || obs.action.object.empty()) report(Violation::Rule::EmptyAction);
      if (!finite(obs.start()) || !finite(obs.end())) {
        report(Violation::Rule::NonFinite);
        continue;
      }
      if (!(obs.start() < obs.end())) report(Violation::Rule::DegenerateInterval);
      if (k > 0 && finite(seq[k - 1].end()) && seq[k - 1].end() > obs.start()) {
        report(Violation::Rule::Overlap);
      }
    }
  }
  return out;
}

std::vector<Violation> validate_dataset(const std::vector<Demonstration>& demos) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < demos.size(); ++i) {
    auto v = validate_demonstration(demos[i]);
    out.insert(out.end(), v.begin(), v.end());
    for (std::size_t j = 0; j < i; ++j) {
      if (demos[j].id == demos[i].id) {
        out.push_back({demos[i].id, Hand::Left, i, Violation::Rule::DuplicateId});
        break;
      }
    }
  }
  return out;
}

std::string_view to_string(AllenRelation r) { return kRelationNames[index_of(r)]; }

std::optional<AllenRelation> allen_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kAllenCount; ++i) {
    if (kRelationNames[i] == name) return static_cast<AllenRelation>(i);
  }
  return std::nullopt;
}

std::string_view to_string(PointRelation r) {
  switch (r) {
    case PointRelation::Before: return "before";
    case PointRelation::Equals: return "equals";
    case PointRelation::After: return "after";
  }
  return "?";
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::SS: return "ss";
    case Channel::SE: return "se";
    case Channel::ES: return "es";
    case Channel::EE: return "ee";
  }
  return "?";
}

std::optional<Channel> channel_from_string(std::string_view name) {
  for (Channel c : kAllChannels) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

PointRelation at(const RelationSignature& sig, Channel c) {
  switch (c) {
    case Channel::SS: return sig.ss;
    case Channel::SE: return sig.se;
    case Channel::ES: return sig.es;
    case Channel::EE: return sig.ee;
  }
  return sig.ss;
}

PointRelation classify_point(TimePoint t1, TimePoint t2, double epsilon) {
  const double d = t1 - t2;
  if (std::abs(d) <= epsilon) return PointRelation::Equals;
  return d < 0.0 ? PointRelation::Before : PointRelation::After;
}

AllenRelation classify_interval(const TimeInterval& x, const TimeInterval& y, double epsilon) {
  if (!(x.duration() > 2.0 * epsilon) || !(y.duration() > 2.0 * epsilon)) {
    std::ostringstream os;
    os << "interval durations " << x.duration() << " and " << y.duration()
       << " must exceed twice the equality margin " << epsilon;
    throw make_error("DegenerateInterval", os.str());
  }
  const RelationSignature sig{
      classify_point(x.start, y.start, epsilon),
      classify_point(x.start, y.end, epsilon),
      classify_point(x.end, y.start, epsilon),
      classify_point(x.end, y.end, epsilon),
  };
  if (auto r = relation_from_signature(sig)) return *r;
  throw make_error("InvalidSignature", "keypoint relations match no Allen relation");
}

AllenRelation invert(AllenRelation r) {
  const auto i = index_of(r);
  if (i == index_of(AllenRelation::Equals)) return r;
  // Relations 0..5 and 7..12 are listed as mirrored halves.
  return static_cast<AllenRelation>(i < 6 ? i + 7 : i - 7);
}

PointRelation invert(PointRelation r) {
  switch (r) {
    case PointRelation::Before: return PointRelation::After;
    case PointRelation::After: return PointRelation::Before;
    case PointRelation::Equals: return PointRelation::Equals;
  }
  return r;
}

RelationSignature signature_of(AllenRelation r) { return kSignatures[index_of(r)]; }

std::optional<AllenRelation> relation_from_signature(const RelationSignature& sig) {
  for (std::size_t i = 0; i < kAllenCount; ++i) {
    if (kSignatures[i] == sig) return static_cast<AllenRelation>(i);
  }
  return std::nullopt;
}

int RelationSet::size() const { return std::popcount(bits_); }

std::vector<AllenRelation> RelationSet::members() const {
  std::vector<AllenRelation> out;
  for (AllenRelation r : kAllAllenRelations) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

RelationSet RelationSet::inverse() const {
  RelationSet out;
  for (AllenRelation r : kAllAllenRelations) {
    if (contains(r)) out |= RelationSet(invert(r));
  }
  return out;
}

std::string RelationSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (AllenRelation r : members()) {
    if (!first) out += ", ";
    out += ttm::to_string(r);
    first = false;
  }
  return out + "}";
}

RelationSet compose(AllenRelation r1, AllenRelation r2) {
  return composition_table()[index_of(r1)][index_of(r2)];
}

RelationSet compose(RelationSet s1, RelationSet s2) {
  if (s1.empty() || s2.empty()) return RelationSet::none();
  if (s1 == RelationSet::all() || s2 == RelationSet::all()) {
    // Every relation composes with something to every relation.
    return RelationSet::all();
  }
  RelationSet out;
  for (AllenRelation a : kAllAllenRelations) {
    if (!s1.contains(a)) continue;
    for (AllenRelation b : kAllAllenRelations) {
      if (s2.contains(b)) out |= compose(a, b);
    }
  }
  return out;
}

}  // namespace ttm
