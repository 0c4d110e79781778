#pragma once

// Published difference families: two S(2,7,505) and two S(2,7,589) families
// over Z_v, and ten 1-rotational S(2,8,624) families over Z_623 ∪ {∞}, each
// with its stated automorphism group order and fingerprint table.

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace steiner::data {

struct RawEntry {
  std::string_view id;
  std::uint32_t modulus;
  std::uint32_t k;
  bool rotational;
  std::uint64_t claimed_order;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> fingerprint;
  std::vector<std::vector<std::uint32_t>> blocks;
};

inline constexpr std::string_view kSource =
    "Steiner systems S(2,7,505), S(2,7,589) and S(2,8,624) via cyclic and 1-rotational difference families";

inline const std::vector<RawEntry>& raw_entries() {
  static const std::vector<RawEntry> entries = {
      {"s2-7-505-1", 505, 7, false, 2525,
       {{1, 15150}, {2, 424200}, {3, 14710650}, {4, 142803900}, {5, 475800900}},
       {{0, 1, 3, 7, 47, 133, 284},
        {0, 5, 70, 100, 173, 185, 476},
        {0, 8, 82, 199, 248, 391, 474},
        {0, 9, 262, 298, 370, 386, 439},
        {0, 10, 137, 156, 213, 233, 246},
        {0, 11, 182, 250, 274, 414, 462},
        {0, 14, 78, 172, 366, 421, 477},
        {0, 15, 136, 157, 174, 322, 344},
        {0, 18, 181, 304, 330, 371, 442},
        {0, 23, 58, 120, 227, 287, 374},
        {0, 25, 105, 150, 209, 260, 310},
        {0, 27, 145, 206, 238, 416, 453}}},
      {"s2-7-505-2", 505, 7, false, 2525,
       {{2, 444400}, {3, 13483500}, {4, 139198200}, {5, 480628700}},
       {{0, 1, 3, 7, 119, 242, 341},
        {0, 5, 51, 63, 95, 254, 287},
        {0, 8, 261, 297, 369, 388, 417},
        {0, 9, 26, 85, 357, 428, 490},
        {0, 10, 170, 310, 391, 455, 492},
        {0, 11, 93, 113, 279, 384, 422},
        {0, 14, 161, 290, 368, 421, 477},
        {0, 16, 89, 158, 273, 327, 453},
        {0, 18, 45, 79, 217, 304, 371},
        {0, 21, 43, 149, 206, 317, 456},
        {0, 25, 135, 175, 328, 375, 450},
        {0, 30, 227, 258, 324, 431, 470}}},
      {"s2-7-589-1", 589, 7, false, 3534,
       {{1, 35340}, {2, 395808}, {3, 13199490}, {4, 190277628}, {5, 803917854}},
       {{0, 1, 4, 258, 357, 455, 572},
        {0, 2, 7, 223, 242, 401, 520},
        {0, 6, 73, 102, 112, 393, 534},
        {0, 8, 251, 341, 426, 527, 555},
        {0, 9, 103, 118, 316, 330, 523},
        {0, 11, 95, 160, 187, 239, 369},
        {0, 12, 237, 267, 318, 390, 501},
        {0, 13, 57, 120, 230, 509, 557},
        {0, 16, 124, 177, 263, 443, 558},
        {0, 20, 136, 174, 439, 476, 553},
        {0, 22, 68, 127, 272, 312, 463},
        {0, 23, 58, 224, 284, 367, 525},
        {0, 24, 78, 121, 203, 421, 563},
        {0, 25, 74, 165, 206, 425, 458}}},
      {"s2-7-589-2", 589, 7, false, 3534,
       {{2, 296856}, {3, 14641362}, {4, 192398028}, {5, 800489874}},
       {{0, 1, 95, 136, 269, 352, 580},
        {0, 2, 26, 114, 317, 355, 515},
        {0, 3, 89, 118, 256, 264, 482},
        {0, 4, 23, 56, 91, 399, 436},
        {0, 5, 11, 75, 421, 457, 472},
        {0, 7, 84, 254, 301, 323, 394},
        {0, 12, 166, 212, 275, 462, 534},
        {0, 13, 62, 248, 420, 545, 572},
        {0, 14, 222, 384, 426, 504, 549},
        {0, 16, 48, 108, 249, 408, 539},
        {0, 18, 39, 119, 144, 396, 478},
        {0, 20, 116, 240, 271, 305, 418},
        {0, 28, 81, 184, 242, 390, 487},
        {0, 43, 164, 223, 313, 374, 447}}},
      {"s2-8-624-1", 623, 8, true, 6853,
       {{2, 68530}, {3, 3673208}, {4, 55879362}, {5, 401119796}, {6, 976086496}},
       {{0, 1, 3, 41, 216, 444, 462, 589}}},
      {"s2-8-624-2", 623, 8, true, 6853,
       {{2, 68530}, {3, 3344264}, {4, 56290542}, {5, 393883028}, {6, 983241028}},
       {{0, 1, 3, 118, 304, 350, 398, 435}}},
      {"s2-8-624-3", 623, 8, true, 6853,
       {{2, 68530}, {3, 3508736}, {4, 56537250}, {5, 400626380}, {6, 976086496}},
       {{0, 1, 3, 189, 286, 304, 568, 580}}},
      {"s2-8-624-4", 623, 8, true, 6853,
       {{2, 68530}, {3, 3618384}, {4, 59826690}, {5, 393389612}, {6, 979924176}},
       {{0, 1, 4, 11, 272, 343, 370, 519}}},
      {"s2-8-624-5", 623, 8, true, 6853,
       {{3, 3453912}, {4, 53042220}, {5, 396213048}, {6, 984118212}},
       {{0, 1, 4, 50, 384, 483, 571, 587}}},
      {"s2-8-624-6", 623, 8, true, 6853,
       {{2, 68530}, {3, 4166624}, {4, 54070170}, {5, 396021164}, {6, 982500904}},
       {{0, 1, 4, 197, 280, 335, 354, 601}}},
      {"s2-8-624-7", 623, 8, true, 6853,
       {{2, 137060}, {3, 3728032}, {4, 56002716}, {5, 398954248}, {6, 978005336}},
       {{0, 1, 4, 340, 434, 443, 471, 505}}},
      {"s2-8-624-8", 623, 8, true, 6853,
       {{2, 137060}, {3, 3728032}, {4, 59621100}, {5, 397967416}, {6, 975373784}},
       {{0, 1, 5, 35, 61, 177, 345, 414}}},
      {"s2-8-624-9", 623, 8, true, 6853,
       {{3, 4440744}, {4, 57935262}, {5, 395472924}, {6, 978978462}},
       {{0, 1, 7, 22, 62, 241, 276, 307}}},
      {"s2-8-624-10", 623, 8, true, 6853,
       {{3, 4111800}, {4, 56783958}, {5, 398104476}, {6, 977827158}},
       {{0, 1, 7, 207, 426, 463, 501, 531}}},
  };
  return entries;
}

// Subgroup H of Z_623 and the multiplier B -> 8B applied 11 times.
inline constexpr std::uint32_t kRotationalSubgroupGenerator = 89;
inline constexpr std::uint32_t kRotationalMultiplier = 8;
inline constexpr std::uint32_t kRotationalMultiplierCount = 11;

}  // namespace steiner::data
