#include "qcext/groups/group_context.hpp"

#include <unordered_set>

#include "expression_parser.hpp"
#include "qcext/errors.hpp"

namespace qcext::groups {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Element to_element(const FactorElement& e) {
  return std::visit([](const auto& x) -> Element { return x; }, e);
}

FactorElement to_factor_element(const Element& e) {
  if (auto w = std::get_if<FreeWord>(&e)) return *w;
  if (auto f = std::get_if<FiniteElement>(&e)) return *f;
  throw MixedContextError("free product element used as a factor element");
}

}  // namespace

std::size_t hash_value(const Element& g) noexcept {
  switch (g.index()) {
    case 0:
      return std::get<FreeWord>(g).hash();
    case 1:
      return mix(0x51, std::get<FiniteElement>(g).index);
    default: {
      std::uint64_t h = 0x7f;
      for (const Syllable& s : std::get<FreeProductElement>(g).syllables()) {
        h = mix(h, static_cast<std::uint64_t>(s.factor));
        if (auto w = std::get_if<FreeWord>(&s.element))
          h = mix(h, w->hash());
        else
          h = mix(h, 0x51 + std::get<FiniteElement>(s.element).index);
      }
      return static_cast<std::size_t>(h);
    }
  }
}

GroupContext::Ptr GroupContext::free_group(Alphabet alphabet) {
  auto ctx = std::shared_ptr<GroupContext>(new GroupContext());
  ctx->kind_ = Kind::FreeGroup;
  ctx->alphabet_ = std::move(alphabet);
  return ctx;
}

GroupContext::Ptr GroupContext::free_group(std::vector<std::string> names) {
  return free_group(Alphabet(std::move(names)));
}

GroupContext::Ptr GroupContext::finite(FiniteGroup table) {
  auto ctx = std::shared_ptr<GroupContext>(new GroupContext());
  ctx->kind_ = Kind::FiniteTable;
  ctx->table_ = std::make_shared<FiniteGroup>(std::move(table));
  return ctx;
}

GroupContext::Ptr GroupContext::free_product(Ptr a, Ptr b) {
  if (!a || !b) throw SchemaError("free product needs two factors");
  if (a->kind() == Kind::FreeProduct || b->kind() == Kind::FreeProduct)
    throw SchemaError("free product factors must be free or finite groups");
  auto ctx = std::shared_ptr<GroupContext>(new GroupContext());
  ctx->kind_ = Kind::FreeProduct;
  ctx->factors_[0] = std::move(a);
  ctx->factors_[1] = std::move(b);
  return ctx;
}

const Alphabet& GroupContext::alphabet() const {
  if (kind_ != Kind::FreeGroup) throw MixedContextError("not a free group context");
  return alphabet_;
}

const FiniteGroup& GroupContext::table() const {
  if (kind_ != Kind::FiniteTable) throw MixedContextError("not a finite group context");
  return *table_;
}

const GroupContext& GroupContext::factor(FactorId f) const { return *factor_ptr(f); }

const GroupContext::Ptr& GroupContext::factor_ptr(FactorId f) const {
  if (kind_ != Kind::FreeProduct) throw MixedContextError("not a free product context");
  return factors_[static_cast<int>(f)];
}

Element GroupContext::identity() const {
  switch (kind_) {
    case Kind::FreeGroup:
      return FreeWord{};
    case Kind::FiniteTable:
      return FiniteElement{0};
    default:
      return FreeProductElement{};
  }
}

bool GroupContext::is_identity(const Element& g) const {
  require(g);
  switch (kind_) {
    case Kind::FreeGroup:
      return std::get<FreeWord>(g).is_identity();
    case Kind::FiniteTable:
      return std::get<FiniteElement>(g).index == 0;
    default:
      return std::get<FreeProductElement>(g).is_identity();
  }
}

bool GroupContext::contains(const Element& g) const {
  switch (kind_) {
    case Kind::FreeGroup: {
      auto w = std::get_if<FreeWord>(&g);
      return w && w->rank_used() <= alphabet_.size();
    }
    case Kind::FiniteTable: {
      auto f = std::get_if<FiniteElement>(&g);
      return f && f->index < table_->order();
    }
    default: {
      auto p = std::get_if<FreeProductElement>(&g);
      if (!p) return false;
      auto syl = p->syllables();
      for (std::size_t i = 0; i < syl.size(); ++i) {
        if (i > 0 && syl[i].factor == syl[i - 1].factor) return false;
        const GroupContext& fc = factor(syl[i].factor);
        Element e = to_element(syl[i].element);
        if (!fc.contains(e) || fc.is_identity(e)) return false;
      }
      return true;
    }
  }
}

void GroupContext::require(const Element& g) const {
  if (!contains(g)) throw MixedContextError("element does not belong to this group context");
}

std::vector<Syllable> GroupContext::multiply_syllables(std::span<const Syllable> g,
                                                       std::span<const Syllable> h) const {
  std::vector<Syllable> out(g.begin(), g.end());
  for (const Syllable& s : h) {
    if (!out.empty() && out.back().factor == s.factor) {
      const GroupContext& fc = factor(s.factor);
      Element merged = fc.product(to_element(out.back().element), to_element(s.element));
      if (fc.is_identity(merged))
        out.pop_back();
      else
        out.back().element = to_factor_element(merged);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

Element GroupContext::product(const Element& g, const Element& h) const {
  require(g);
  require(h);
  switch (kind_) {
    case Kind::FreeGroup:
      return std::get<FreeWord>(g) * std::get<FreeWord>(h);
    case Kind::FiniteTable:
      return FiniteElement{table_->multiply(std::get<FiniteElement>(g).index, std::get<FiniteElement>(h).index)};
    default:
      return FreeProductElement(multiply_syllables(std::get<FreeProductElement>(g).syllables(),
                                                   std::get<FreeProductElement>(h).syllables()));
  }
}

Element GroupContext::inverse(const Element& g) const {
  require(g);
  switch (kind_) {
    case Kind::FreeGroup:
      return std::get<FreeWord>(g).inverse();
    case Kind::FiniteTable:
      return FiniteElement{table_->inverse(std::get<FiniteElement>(g).index)};
    default: {
      auto syl = std::get<FreeProductElement>(g).syllables();
      std::vector<Syllable> out;
      out.reserve(syl.size());
      for (auto it = syl.rbegin(); it != syl.rend(); ++it) {
        Element inv = factor(it->factor).inverse(to_element(it->element));
        out.push_back({it->factor, to_factor_element(inv)});
      }
      return FreeProductElement(std::move(out));
    }
  }
}

Element GroupContext::power(const Element& g, std::int64_t n) const {
  require(g);
  if (kind_ == Kind::FreeGroup) return std::get<FreeWord>(g).pow(n);
  Element base = n < 0 ? inverse(g) : g;
  std::uint64_t m = static_cast<std::uint64_t>(n < 0 ? -n : n);
  Element acc = identity();
  while (m > 0) {
    if (m & 1) acc = product(acc, base);
    m >>= 1;
    if (m > 0) base = product(base, base);
  }
  return acc;
}

std::vector<Element> GroupContext::generators() const {
  std::vector<Element> gens;
  switch (kind_) {
    case Kind::FreeGroup:
      for (std::size_t i = 0; i < alphabet_.size(); ++i) gens.emplace_back(FreeWord::generator(i));
      break;
    case Kind::FiniteTable:
      for (std::uint32_t i = 1; i < table_->order(); ++i) gens.emplace_back(FiniteElement{i});
      break;
    default:
      for (FactorId f : {FactorId::A, FactorId::B})
        for (const Element& e : factor(f).generators()) gens.push_back(embed(f, e));
      break;
  }
  return gens;
}

Element GroupContext::embed(FactorId f, const Element& factor_element) const {
  const GroupContext& fc = factor(f);
  fc.require(factor_element);
  if (fc.is_identity(factor_element)) return FreeProductElement{};
  return FreeProductElement({Syllable{f, to_factor_element(factor_element)}});
}

Element GroupContext::from_syllables(std::vector<Syllable> syllables) const {
  if (kind_ != Kind::FreeProduct) throw MixedContextError("not a free product context");
  return FreeProductElement(multiply_syllables({}, syllables));
}

namespace {

struct ContextOps {
  using Value = Element;
  const GroupContext& ctx;

  Value identity() const { return ctx.identity(); }

  static std::optional<Element> lookup(const GroupContext& fc, const std::string& name) {
    if (fc.kind() == GroupContext::Kind::FreeGroup) {
      auto idx = fc.alphabet().find(name);
      if (idx) return Element(FreeWord::generator(*idx));
      return std::nullopt;
    }
    if (fc.kind() == GroupContext::Kind::FiniteTable) {
      auto idx = fc.table().find(name);
      if (idx) return Element(FiniteElement{*idx});
    }
    return std::nullopt;
  }

  Value resolve(const std::string& prefix, const std::string& name) const {
    if (ctx.kind() != GroupContext::Kind::FreeProduct) {
      if (!prefix.empty()) throw ParseError("factor prefix used outside a free product");
      auto e = lookup(ctx, name);
      if (!e) throw ParseError("unknown generator symbol '" + name + "'");
      return *e;
    }
    if (!prefix.empty()) {
      FactorId f = prefix == "A" ? FactorId::A : FactorId::B;
      auto e = lookup(ctx.factor(f), name);
      if (!e) throw ParseError("unknown generator symbol '" + prefix + ":" + name + "'");
      return ctx.embed(f, *e);
    }
    auto a = lookup(ctx.factor(FactorId::A), name);
    auto b = lookup(ctx.factor(FactorId::B), name);
    if (a && b) throw ParseError("ambiguous symbol '" + name + "': prefix it with A: or B:");
    if (a) return ctx.embed(FactorId::A, *a);
    if (b) return ctx.embed(FactorId::B, *b);
    throw ParseError("unknown generator symbol '" + name + "'");
  }

  Value mul(const Value& a, const Value& b) const { return ctx.product(a, b); }
  Value inv(const Value& a) const { return ctx.inverse(a); }
  Value pow(const Value& a, std::int64_t n) const { return ctx.power(a, n); }
};

bool symbol_in(const GroupContext& fc, const std::string& name) {
  return ContextOps::lookup(fc, name).has_value();
}

std::string format_factor_element(const GroupContext& fc, const FactorElement& e, const char* prefix) {
  if (auto f = std::get_if<FiniteElement>(&e)) {
    const std::string& name = fc.table().name(f->index);
    return prefix ? std::string(prefix) + ":" + name : name;
  }
  std::string s = format_word(fc.alphabet(), std::get<FreeWord>(e));
  if (!prefix) return s;
  std::string out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    if (!out.empty()) out += ' ';
    out += std::string(prefix) + ":" + s.substr(start, end - start);
    start = end + 1;
  }
  return out;
}

}  // namespace

Element GroupContext::parse(std::string_view text) const {
  ContextOps ops{*this};
  return detail::ExpressionParser<ContextOps>(text, ops).parse();
}

std::string GroupContext::format(const Element& g) const {
  require(g);
  switch (kind_) {
    case Kind::FreeGroup:
      return format_word(alphabet_, std::get<FreeWord>(g));
    case Kind::FiniteTable: {
      auto idx = std::get<FiniteElement>(g).index;
      return idx == 0 ? "1" : table_->name(idx);
    }
    default: {
      const auto& p = std::get<FreeProductElement>(g);
      if (p.is_identity()) return "1";
      std::string out;
      for (const Syllable& s : p.syllables()) {
        const GroupContext& fc = factor(s.factor);
        const GroupContext& oc = factor(other(s.factor));
        bool ambiguous = false;
        if (auto w = std::get_if<FreeWord>(&s.element)) {
          for (Letter l : w->letters()) ambiguous = ambiguous || symbol_in(oc, fc.alphabet().name(generator_of(l)));
        } else {
          ambiguous = symbol_in(oc, fc.table().name(std::get<FiniteElement>(s.element).index));
        }
        if (!out.empty()) out += ' ';
        out += format_factor_element(fc, s.element, ambiguous ? factor_name(s.factor) : nullptr);
      }
      return out;
    }
  }
}

std::vector<Element> enumerate_ball(const GroupContext& ctx, std::span<const Element> gens, std::size_t radius,
                                    std::size_t radius_cap, std::size_t max_elements) {
  if (radius > radius_cap)
    throw CapExceeded("ball radius " + std::to_string(radius) + " exceeds cap " + std::to_string(radius_cap));
  std::vector<Element> steps;
  for (const Element& g : gens) {
    steps.push_back(g);
    steps.push_back(ctx.inverse(g));
  }
  std::vector<Element> ball{ctx.identity()};
  std::unordered_set<Element, ElementHash> seen{ctx.identity()};
  std::size_t layer_begin = 0;
  for (std::size_t r = 0; r < radius; ++r) {
    std::size_t layer_end = ball.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const Element& s : steps) {
        Element next = ctx.product(ball[i], s);
        if (seen.insert(next).second) {
          ball.push_back(std::move(next));
          if (ball.size() > max_elements) throw CapExceeded("ball enumeration exceeded element cap");
        }
      }
    }
    layer_begin = layer_end;
  }
  return ball;
}

}  // namespace qcext::groups
