//! Input file schemas, printed by `berkrh --schema`.
//!
//! Every number is an exact string: an integer "5", a fraction "-3/25", or
//! "inf" where a point at infinity is allowed. Bare floating point
//! literals are rejected. Radii are log scale throughout: a disc of radius
//! p^(-s) is written with "log_radius": "s".

pub const SCHEMAS: &str = r#"berkrh input file schemas (all numbers are exact strings; no floats)

polynomial (polygon --poly, part of map files)
  { "<exponent>": "<coefficient>", ... }
  example: { "0": "-1", "5": "1" }          # T^5 - 1

map (annulus analyze --map, charp divisor --map)
  { "num": <polynomial>, "den": <polynomial> }   # den optional, default "1"
  the fraction is reduced exactly on load; den is normalized monic

direction (annulus analyze --dir)
  {
    "center": "<rational or inf>",      # sphere center
    "log_radius": "<rational>",         # sphere log-radius s, radius p^(-s)
    "side": "inside" | "outside",       # inside: radii just below p^(-s)
    "image_center": "<rational or inf>" # chart of the image component
  }

domain (euler --domain, embedded in morphism files)
  {
    "genus": 0,
    "removed_open":   [ { "center": "<rational or inf>", "log_radius": "<rational>" }, ... ],
    "removed_closed": [ ... same shape ... ]
  }
  removed discs must be pairwise disjoint; a disc with center "inf" is read
  through 1/T, so D(inf; s) is {v(x) <= -s} plus the point at infinity.
  removed_open entries carry the outward (TY) directions, removed_closed
  the inward (T_in) ones.

morphism (rh check --morphism)
  {
    "map": <map>,
    "domain": <domain>,
    "codomain": <domain>,
    "direction_images": { "<i>": "<j>", ... },
    "p": 5
  }
  keys i index the domain's removed discs (open first, then closed, from
  0); values j index the codomain's removed discs the same way. Every
  domain boundary germ must be assigned the codomain component it maps
  into.

graph (ledger verify --graph)
  {
    "vertices": [ { "id": "<name>", "chi_piece": 0, "deg_local": 5, "ram_local": 0 }, ... ],
    "internal_edges": [ { "id": "<name>",
                          "end_a": { "vertex": "<id>", "nu": 4 },
                          "end_b": { "vertex": "<id>", "nu": -4 } }, ... ],
    "external_ends": [ { "vertex": "<id>", "kind": "TY" | "T_in", "nu": 4,
                         "label": "<optional report label>" }, ... ],
    "chi_x_pieces": [ 0, 1 ],
    "chi_total": 1,
    "deg": 5
  }

hints (charp divisor --hints)
  [ "<rational>", ... ]                 # candidate residue direction centers

reports
  rh check / ledger verify emit an RHReport:
    { "chi_y", "chi_x", "deg", "ram_sum",
      "nu_out": [ { "direction", "nu" } ], "nu_in": [...],
      "lhs", "rhs", "balanced" }
  charp divisor emits:
    { "directions": [ ["<center or inf>", sigma], ... ],
      "total", "expected", "status": "VERIFIED" | "INCOMPLETE" }

exit codes: 0 = verified/balanced, 1 = a check failed (report emitted),
2 = input or schema error."#;
