#include "nlns/destroy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nlns {

std::string DestroyOperatorSpec::id() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s:%.2f",
                  procedure == DestroyProcedure::PointBased ? "point" : "tour", degree);
    return buf;
}

DestroyOperatorSpec parse_destroy_spec(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("destroy spec must look like point:0.2");
    std::string kind = text.substr(0, colon);
    DestroyOperatorSpec spec;
    if (kind == "point")
        spec.procedure = DestroyProcedure::PointBased;
    else if (kind == "tour")
        spec.procedure = DestroyProcedure::TourBased;
    else
        throw std::invalid_argument("unknown destroy procedure: " + kind);
    spec.degree = std::stod(text.substr(colon + 1));
    if (!(spec.degree > 0.0 && spec.degree <= 1.0))
        throw std::invalid_argument("degree of destruction must be in (0, 1]");
    return spec;
}

std::vector<DestroyOperatorSpec> default_destroy_specs() {
    return {{DestroyProcedure::PointBased, 0.1},
            {DestroyProcedure::PointBased, 0.2},
            {DestroyProcedure::TourBased, 0.1},
            {DestroyProcedure::TourBased, 0.2}};
}

int removal_count(int num_customers, double degree) {
    int k = static_cast<int>(std::lround(degree * num_customers));
    return std::clamp(k, 1, num_customers);
}

namespace {

Point random_point_in_bbox(const Instance& instance, Rng& rng) {
    double min_x = instance.position(0).x, max_x = min_x;
    double min_y = instance.position(0).y, max_y = min_y;
    for (int i = 1; i < instance.num_nodes(); ++i) {
        const Point& p = instance.position(i);
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    return {rng.uniform(min_x, max_x), rng.uniform(min_y, max_y)};
}

double sq_dist(const Point& a, const Point& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Splits one tour at the removed visit positions. Surviving runs keep their
// depot attachment at the outermost ends; removed visits become singletons.
void split_tour(const Tour& tour, const std::vector<bool>& removed_at,
                DestroyedSolution& out) {
    const size_t n = tour.visits.size();
    size_t run_start = 0;
    auto close_run = [&](size_t end) {  // half-open [run_start, end)
        if (end <= run_start) return;
        Fragment piece;
        piece.visits.assign(tour.visits.begin() + run_start, tour.visits.begin() + end);
        if (run_start == 0)
            piece.depot = DepotEnd::Front;
        else if (end == n)
            piece.depot = DepotEnd::Back;
        out.fragments.push_back(std::move(piece));
    };
    for (size_t i = 0; i < n; ++i) {
        if (!removed_at[i]) continue;
        close_run(i);
        out.fragments.push_back({{tour.visits[i]}, DepotEnd::None});
        run_start = i + 1;
    }
    close_run(n);
}

void check_preconditions(const Solution& solution) {
    if (solution.tours.empty()) throw std::invalid_argument("cannot destroy an empty solution");
}

}  // namespace

DestroyedSolution point_destroy(const Instance& instance, const Solution& solution,
                                const DestroyOperatorSpec& spec, Rng& rng) {
    check_preconditions(solution);
    Point p = random_point_in_bbox(instance, rng);

    // k nearest customers to the point; ties go to the lower node index
    std::vector<int> customers(instance.num_customers());
    std::iota(customers.begin(), customers.end(), 1);
    std::stable_sort(customers.begin(), customers.end(), [&](int a, int b) {
        return sq_dist(instance.position(a), p) < sq_dist(instance.position(b), p);
    });
    int k = removal_count(instance.num_customers(), spec.degree);
    std::vector<bool> remove_customer(instance.num_nodes(), false);
    for (int i = 0; i < k; ++i) remove_customer[customers[i]] = true;

    DestroyedSolution destroyed;
    for (const Tour& tour : solution.tours) {
        std::vector<bool> removed_at(tour.visits.size(), false);
        bool any = false;
        for (size_t i = 0; i < tour.visits.size(); ++i)
            if (remove_customer[tour.visits[i].node]) removed_at[i] = any = true;
        if (any)
            split_tour(tour, removed_at, destroyed);
        else
            destroyed.complete_tours.push_back(tour);
    }
    return destroyed;
}

DestroyedSolution tour_destroy(const Instance& instance, const Solution& solution,
                               const DestroyOperatorSpec& spec, Rng& rng) {
    check_preconditions(solution);
    Point p = random_point_in_bbox(instance, rng);

    // rank tours by their closest customer; remove whole tours until the
    // removed visit count reaches the threshold
    std::vector<size_t> order(solution.tours.size());
    std::iota(order.begin(), order.end(), size_t{0});
    auto tour_dist = [&](size_t t) {
        double best = sq_dist(instance.position(solution.tours[t].visits.front().node), p);
        for (const auto& v : solution.tours[t].visits)
            best = std::min(best, sq_dist(instance.position(v.node), p));
        return best;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return tour_dist(a) < tour_dist(b); });

    int k = removal_count(instance.num_customers(), spec.degree);
    std::vector<bool> removed_tour(solution.tours.size(), false);
    int removed_visits = 0;
    for (size_t t : order) {
        if (removed_visits >= k) break;
        removed_tour[t] = true;
        removed_visits += static_cast<int>(solution.tours[t].visits.size());
    }

    DestroyedSolution destroyed;
    for (size_t t = 0; t < solution.tours.size(); ++t) {
        if (!removed_tour[t]) {
            destroyed.complete_tours.push_back(solution.tours[t]);
            continue;
        }
        for (const auto& v : solution.tours[t].visits)
            destroyed.fragments.push_back({{v}, DepotEnd::None});
    }
    return destroyed;
}

DestroyedSolution apply_destroy(const Instance& instance, const Solution& solution,
                                const DestroyOperatorSpec& spec, Rng& rng) {
    return spec.procedure == DestroyProcedure::PointBased
               ? point_destroy(instance, solution, spec, rng)
               : tour_destroy(instance, solution, spec, rng);
}

double destroyed_cost(const Instance& instance, const DestroyedSolution& destroyed) {
    double c = 0.0;
    for (const auto& t : destroyed.complete_tours) c += tour_cost(instance, t);
    for (const auto& f : destroyed.fragments) {
        for (size_t i = 0; i + 1 < f.visits.size(); ++i)
            c += instance.travel_cost(f.visits[i].node, f.visits[i + 1].node);
        if (f.depot == DepotEnd::Front)
            c += instance.travel_cost(0, f.visits.front().node);
        else if (f.depot == DepotEnd::Back)
            c += instance.travel_cost(f.visits.back().node, 0);
    }
    return c;
}

}  // namespace nlns
