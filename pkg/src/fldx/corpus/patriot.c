/* A clock that counts tenths of a second by repeatedly adding 0.1,
   which is not representable in binary: the error drifts with every
   tick. Analyze with the binary32 format. */
int main() {
  double t = 0.0;
  int i = 0;
  while (i < 1000) {
    t = t + 0.1;
    i = i + 1;
  }
  /*@ accuracy_assert_derr(t, -1.9e-3, 1.9e-3); */
  /*@ dprint(t); */
  return 0;
}
