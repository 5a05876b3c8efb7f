/* recovered source */
struct timespec { long tv_sec; long tv_nsec; };

void __normalize_timespec(struct timespec *t) {
  while (t->tv_nsec >= 1000000000) {
    t->tv_nsec = t->tv_nsec - 1000000000;
    t->tv_sec = t->tv_sec + 1;
  }
}

void __time_sub(struct timespec *a, struct timespec *b, struct timespec *r) {
  r->tv_sec = a->tv_sec - b->tv_sec;
  r->tv_nsec = a->tv_nsec - b->tv_nsec;
  if (r->tv_nsec < 0) {
    r->tv_sec = r->tv_sec - 1;
    r->tv_nsec = r->tv_nsec + 1000000000;
  }
  __normalize_timespec(r);
}

void __time_add(struct timespec *a, struct timespec *b, struct timespec *r) {
  r->tv_sec = a->tv_sec + b->tv_sec;
  r->tv_nsec = a->tv_nsec + b->tv_nsec;
  if (r->tv_nsec >= 1000000000) {
    r->tv_sec = r->tv_sec + 1;
    r->tv_nsec = r->tv_nsec - 1000000000;
  }
}
