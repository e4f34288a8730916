/* Interpolation with the cell found by a loop instead of a cast; the
   comparisons against the knots are unstable near each knot. */
int main() {
  double t[5] = {0.0, 1.0, 2.0, 3.0, 4.0};
  double v[5] = {0.0, 2.0, 3.0, 3.5, 3.75};
  double in = read_double(0.5, 2.5);
  int i = 0;
  while (i < 3 && in >= t[i + 1]) {
    i = i + 1;
  }
  double res = v[i] + (in - t[i]) * (v[i + 1] - v[i]);
  /*@ accuracy_assert_derr(res, -1e-4, 1e-4); */
  /*@ dprint(res); */
  return 0;
}
