/* Second-order linear filter over a fixed input sequence; errors fed
   back through the state decay geometrically. */
int main() {
  double e[8] = {0.5, 0.62, 0.45, 0.31, 0.58, 0.71, 0.49, 0.53};
  double s0 = 0.0;
  double s1 = 0.0;
  double s = 0.0;
  int i = 0;
  while (i < 8) {
    s = 0.7 * s0 - 0.2 * s1 + 0.5 * e[i];
    s1 = s0;
    s0 = s;
    i = i + 1;
  }
  /*@ accuracy_assert_derr(s, -1e-14, 1e-14); */
  /*@ dprint(s); */
  return 0;
}
