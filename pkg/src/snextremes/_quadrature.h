#ifndef SNEXTREMES_QUADRATURE_H
#define SNEXTREMES_QUADRATURE_H

void owen_panel_sums(const double *h, const double *hi, double *out, long m,
                     int panels, const double *nodes, const double *weights);

#endif
