#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttm/error.hpp"

namespace ttm {

// ---------------------------------------------------------------------------
// Time points and intervals
// ---------------------------------------------------------------------------

/// Seconds. Finite values only; checked where values enter the library.
using TimePoint = double;

/// Closed time interval [start, end]. Valid intervals satisfy start < end;
/// the struct itself does not enforce this so that invalid input can be
/// reported by `validate_demonstration` instead of failing at parse time.
struct TimeInterval {
  TimePoint start = 0.0;
  TimePoint end = 0.0;

  double duration() const { return end - start; }
  bool valid() const;

  /// Throws `InvalidInterval` unless start < end and both are finite.
  static TimeInterval checked(TimePoint start, TimePoint end);

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

// ---------------------------------------------------------------------------
// Actions and demonstrations
// ---------------------------------------------------------------------------

struct Action {
  std::string verb;
  std::string object;

  /// "verb:object"
  std::string key() const { return verb + ":" + object; }

  /// Parses "verb:object". Throws `InvalidAction` on malformed input.
  static Action parse(std::string_view key);

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

enum class Hand : std::uint8_t { Left, Right };

std::string_view to_string(Hand hand);
std::optional<Hand> hand_from_string(std::string_view name);

struct ActionObservation {
  Action action;
  TimeInterval interval;

  TimePoint start() const { return interval.start; }
  TimePoint end() const { return interval.end; }

  friend bool operator==(const ActionObservation&, const ActionObservation&) = default;
};

/// Observations of one hand, in execution order.
using ActionSequence = std::vector<ActionObservation>;

struct Demonstration {
  std::string id;
  ActionSequence left;
  ActionSequence right;

  const ActionSequence& hand(Hand h) const { return h == Hand::Left ? left : right; }

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

struct Violation {
  enum class Rule : std::uint8_t { DegenerateInterval, NonFinite, Overlap, EmptyAction, DuplicateId };

  std::string demo_id;
  Hand hand = Hand::Left;
  std::size_t index = 0;
  Rule rule = Rule::DegenerateInterval;

  std::string describe() const;
};

/// Checks the per-hand ordering rule a1- < a1+ <= a2- < a2+ < ... .
/// Touching observations (a_k+ == a_{k+1}-) are allowed.
std::vector<Violation> validate_demonstration(const Demonstration& demo);

/// Validates every demonstration and additionally reports duplicate ids.
std::vector<Violation> validate_dataset(const std::vector<Demonstration>& demos);

// ---------------------------------------------------------------------------
// Point and interval relations
// ---------------------------------------------------------------------------

enum class PointRelation : std::uint8_t { Before, Equals, After };

inline constexpr std::size_t kAllenCount = 13;

enum class AllenRelation : std::uint8_t {
  Before,
  Meets,
  Overlaps,
  Starts,
  During,
  Finishes,
  Equals,
  After,
  MetBy,
  OverlappedBy,
  StartedBy,
  Contains,
  FinishedBy,
};

inline constexpr std::array<AllenRelation, kAllenCount> kAllAllenRelations = {
    AllenRelation::Before,       AllenRelation::Meets,     AllenRelation::Overlaps,
    AllenRelation::Starts,       AllenRelation::During,    AllenRelation::Finishes,
    AllenRelation::Equals,       AllenRelation::After,     AllenRelation::MetBy,
    AllenRelation::OverlappedBy, AllenRelation::StartedBy, AllenRelation::Contains,
    AllenRelation::FinishedBy,
};

constexpr std::size_t index_of(AllenRelation r) { return static_cast<std::size_t>(r); }

/// Lowercase wire name, e.g. "met_by".
std::string_view to_string(AllenRelation r);
std::optional<AllenRelation> allen_from_string(std::string_view name);
std::string_view to_string(PointRelation r);

/// Point relations between the four keypoint pairs of two intervals x, y:
/// ss = (x-, y-), se = (x-, y+), es = (x+, y-), ee = (x+, y+).
struct RelationSignature {
  PointRelation ss = PointRelation::Equals;
  PointRelation se = PointRelation::Equals;
  PointRelation es = PointRelation::Equals;
  PointRelation ee = PointRelation::Equals;

  friend bool operator==(const RelationSignature&, const RelationSignature&) = default;
};

/// Keypoint channel of an action pair. Order matches RelationSignature.
enum class Channel : std::uint8_t { SS, SE, ES, EE };

inline constexpr std::array<Channel, 4> kAllChannels = {Channel::SS, Channel::SE, Channel::ES,
                                                        Channel::EE};

std::string_view to_string(Channel c);
std::optional<Channel> channel_from_string(std::string_view name);
PointRelation at(const RelationSignature& sig, Channel c);

PointRelation classify_point(TimePoint t1, TimePoint t2, double epsilon);

/// Throws `DegenerateInterval` if a duration is <= 2*epsilon and
/// `InvalidSignature` if the four point relations match no Allen relation.
AllenRelation classify_interval(const TimeInterval& x, const TimeInterval& y, double epsilon);

AllenRelation invert(AllenRelation r);
PointRelation invert(PointRelation r);

/// Full four-condition signature, including the conditions implied by
/// interval validity.
RelationSignature signature_of(AllenRelation r);

/// Inverse of `signature_of` on the 13 realizable signatures.
std::optional<AllenRelation> relation_from_signature(const RelationSignature& sig);

/// Set of Allen relations as a 13-bit mask.
class RelationSet {
 public:
  constexpr RelationSet() = default;
  constexpr explicit RelationSet(std::uint16_t bits) : bits_(bits & kMask) {}
  constexpr RelationSet(AllenRelation r) : bits_(std::uint16_t(1u << index_of(r))) {}

  static constexpr RelationSet all() { return RelationSet(kMask); }
  static constexpr RelationSet none() { return RelationSet(); }

  constexpr bool contains(AllenRelation r) const { return (bits_ >> index_of(r)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint16_t bits() const { return bits_; }
  int size() const;

  /// Members in enumeration order.
  std::vector<AllenRelation> members() const;

  /// The set of inverses of all members.
  RelationSet inverse() const;

  constexpr RelationSet operator|(RelationSet o) const { return RelationSet(bits_ | o.bits_); }
  constexpr RelationSet operator&(RelationSet o) const { return RelationSet(bits_ & o.bits_); }
  constexpr RelationSet& operator|=(RelationSet o) { bits_ |= o.bits_; return *this; }
  constexpr RelationSet& operator&=(RelationSet o) { bits_ &= o.bits_; return *this; }

  friend constexpr bool operator==(RelationSet, RelationSet) = default;

  std::string to_string() const;

 private:
  static constexpr std::uint16_t kMask = (1u << kAllenCount) - 1u;
  std::uint16_t bits_ = 0;
};

/// Allen's transitivity table: relations possible between a and c given
/// r1(a, b) and r2(b, c).
RelationSet compose(AllenRelation r1, AllenRelation r2);

/// Union of compose over all member pairs.
RelationSet compose(RelationSet s1, RelationSet s2);

}  // namespace ttm
