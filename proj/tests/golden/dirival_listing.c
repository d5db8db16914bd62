void FIRST_DirIval_int( DirIval c, int &e ) {
  if (c.delta > 0) e = c.min; else e = c.max;
}

bool DONE_DirIval_int( DirIval c, int e ) {
  return (c.delta > 0 ? e > c.max : e < c.min);
}

void NEXT_DirIval_int( DirIval c, int &e ) { 
  e += c.delta; 
}

int DATA_DirIval_int( DirIval c, int e ) { 
  return e; 
}

void print_DirIval( DirIval c ) {
  int e;
  for ( FIRST_DirIval_int(c,e); 
        !DONE_DirIval_int(c,e);
        NEXT_DirIval_int(c,e) ) {
    print_int( DATA_DirIval_int(c,e) );
  }
}
