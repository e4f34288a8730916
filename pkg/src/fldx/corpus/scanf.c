/* External input: read_double stands in for a library read; the value
   is only known by its declared range. */
int main() {
  double v = read_double(0.0, 10.0);
  double res = (v * 9.0) / 5.0 + 32.0;
  /*@ accuracy_assert_derr(res, -1e-6, 1e-6); */
  /*@ dprint(res); */
  return 0;
}
