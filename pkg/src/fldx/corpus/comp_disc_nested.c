/* Nested conditionals with a 0.1 discontinuity on the innermost
   branch; the unstable flows through both tests must be tracked. */
int main() {
  double x = read_double(0.4999999, 0.5000001);
  double y = read_double(0.0, 1.0);
  double z;
  if (x < 0.5) {
    if (y < 0.5) {
      z = x + y;
    } else {
      z = x + y + 0.1;
    }
  } else {
    z = x + y + 0.1;
  }
  /*@ accuracy_assert_derr(z, -1e-6, 1e-6); */
  /*@ dprint(z); */
  return 0;
}
